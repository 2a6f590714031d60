#ifndef BNNLAB_ESTIMATORS_HPP
#define BNNLAB_ESTIMATORS_HPP

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bnnlab/horseshoe.hpp"
#include "bnnlab/random.hpp"
#include "bnnlab/shrinkage.hpp"

namespace bnnlab {

/// Decision rules for the normal location model Y ~ N_p(theta, I_p).
/// Radial rules return a(||y||^2) * y; horseshoe returns the Gibbs
/// posterior mean and is the only stochastic rule.
struct IdentityRule {};

struct RadialTableRule {
    std::shared_ptr<const ShrinkageTable> table;
};

struct RadialClosedRule {
    int p = 5;  // requires p >= 5
};

struct JamesSteinRule {
    int p = 3;  // requires p >= 3; untruncated, delta(0) = 0 by convention
};

struct HorseshoeRule {
    HorseshoeConfig config;
};

struct DecisionRule {
    std::string label;
    std::variant<IdentityRule, RadialTableRule, RadialClosedRule, JamesSteinRule, HorseshoeRule>
        form;

    bool is_stochastic() const { return std::holds_alternative<HorseshoeRule>(form); }
    /// Dimension pinned by the rule itself, if any.
    std::optional<int> required_dimension() const;

    static DecisionRule identity(std::string label = "mle");
    static DecisionRule radial_table(std::shared_ptr<const ShrinkageTable> table,
                                     std::string label);
    static DecisionRule radial_closed(int p, std::string label = "bnn-hyper");
    static DecisionRule james_stein(int p, std::string label = "js");
    static DecisionRule horseshoe(HorseshoeConfig config, std::string label = "horseshoe");
};

/// Applies the rule to one observation. rng is required only for the
/// horseshoe rule. Throws on dimension mismatch.
std::vector<double> apply(const DecisionRule& rule, const std::vector<double>& y,
                          RandomStream* rng = nullptr);

/// Horseshoe application that threads a warm-start state across repeated
/// replications (used by the risk driver). Deterministic rules ignore the
/// state.
std::vector<double> apply_with_state(const DecisionRule& rule, const std::vector<double>& y,
                                     RandomStream* rng,
                                     std::optional<HorseshoeState>& horseshoe_state);

double squared_norm(const std::vector<double>& y);

} // namespace bnnlab

#endif
