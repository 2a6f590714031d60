#include "bnnlab/estimators.hpp"

#include <cmath>
#include <stdexcept>

namespace bnnlab {

double squared_norm(const std::vector<double>& y) {
    double s = 0.0;
    for (double v : y) {
        s += v * v;
    }
    return s;
}

std::optional<int> DecisionRule::required_dimension() const {
    if (const auto* table = std::get_if<RadialTableRule>(&form)) {
        return table->table->p;
    }
    if (const auto* closed = std::get_if<RadialClosedRule>(&form)) {
        return closed->p;
    }
    if (const auto* js = std::get_if<JamesSteinRule>(&form)) {
        return js->p;
    }
    return std::nullopt;
}

DecisionRule DecisionRule::identity(std::string label) {
    return DecisionRule{std::move(label), IdentityRule{}};
}

DecisionRule DecisionRule::radial_table(std::shared_ptr<const ShrinkageTable> table,
                                        std::string label) {
    if (!table) {
        throw std::invalid_argument("DecisionRule: null shrinkage table");
    }
    return DecisionRule{std::move(label), RadialTableRule{std::move(table)}};
}

DecisionRule DecisionRule::radial_closed(int p, std::string label) {
    if (p < 5) {
        throw std::invalid_argument("DecisionRule: closed-form rule requires p >= 5");
    }
    return DecisionRule{std::move(label), RadialClosedRule{p}};
}

DecisionRule DecisionRule::james_stein(int p, std::string label) {
    if (p < 3) {
        throw std::invalid_argument("DecisionRule: James-Stein requires p >= 3");
    }
    return DecisionRule{std::move(label), JamesSteinRule{p}};
}

DecisionRule DecisionRule::horseshoe(HorseshoeConfig config, std::string label) {
    config.validate();
    return DecisionRule{std::move(label), HorseshoeRule{config}};
}

namespace {

std::vector<double> scale_by(const std::vector<double>& y, double a) {
    std::vector<double> out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        out[i] = a * y[i];
    }
    return out;
}

} // namespace

std::vector<double> apply_with_state(const DecisionRule& rule, const std::vector<double>& y,
                                     RandomStream* rng,
                                     std::optional<HorseshoeState>& horseshoe_state) {
    if (const auto dim = rule.required_dimension(); dim && *dim != static_cast<int>(y.size())) {
        throw std::invalid_argument("apply: observation dimension " + std::to_string(y.size()) +
                                    " does not match rule dimension " + std::to_string(*dim));
    }
    if (std::holds_alternative<IdentityRule>(rule.form)) {
        return y;
    }
    if (const auto* table = std::get_if<RadialTableRule>(&rule.form)) {
        return scale_by(y, eval_table(*table->table, squared_norm(y)));
    }
    if (const auto* closed = std::get_if<RadialClosedRule>(&rule.form)) {
        return scale_by(y, shrink_betaprime_closed(closed->p, squared_norm(y)));
    }
    if (const auto* js = std::get_if<JamesSteinRule>(&rule.form)) {
        const double s = squared_norm(y);
        if (s == 0.0) {
            return std::vector<double>(y.size(), 0.0);
        }
        return scale_by(y, 1.0 - (static_cast<double>(js->p) - 2.0) / s);
    }
    const auto& hs = std::get<HorseshoeRule>(rule.form);
    if (rng == nullptr) {
        throw std::invalid_argument("apply: horseshoe rule needs a random stream");
    }
    HorseshoeEstimate est = horseshoe_posterior_mean(y, hs.config, horseshoe_state, *rng);
    horseshoe_state = std::move(est.final_state);
    return std::move(est.estimate);
}

std::vector<double> apply(const DecisionRule& rule, const std::vector<double>& y,
                          RandomStream* rng) {
    std::optional<HorseshoeState> no_state;
    return apply_with_state(rule, y, rng, no_state);
}

} // namespace bnnlab
