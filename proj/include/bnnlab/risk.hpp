#ifndef BNNLAB_RISK_HPP
#define BNNLAB_RISK_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bnnlab/estimators.hpp"

namespace bnnlab {

/// Quadratic-risk estimates over a grid of signal norms.
struct RiskCurve {
    int p = 0;
    std::vector<double> r_grid;
    std::optional<int> sparsity;  // k, when the grid came from a sparsity sweep
    std::vector<double> risks;
    std::vector<double> stderrs;
    std::string rule_label;
    long n_mc = 0;
    int k_dir = 0;
    std::uint64_t seed = 0;
};

struct RiskEstimate {
    double risk = 0.0;
    double stderr_ = 0.0;
};

/// Monte Carlo risk at a fixed theta: mean and standard error of
/// ||delta(Y) - theta||^2 over n_mc draws Y = theta + Z. Deterministic in
/// seed. Horseshoe replications are warm-started in sequence.
RiskEstimate mc_risk(const DecisionRule& rule, const std::vector<double>& theta, long n_mc,
                     std::uint64_t seed);

/// Risk as a function of r = ||theta||: at each grid point, mc_risk is
/// averaged over k_dir uniformly random directions (a single direction at
/// r = 0, where direction is irrelevant). Each (r, direction) task draws
/// from a stream derived from (seed, r index, direction index), and the
/// standard error combines within- and between-direction variance.
RiskCurve risk_curve(const DecisionRule& rule, int p, const std::vector<double>& r_grid,
                     int k_dir, long n_mc, std::uint64_t seed);

/// Risk curve over k-sparse means theta_{r,k} (fixed support pattern).
RiskCurve risk_curve_sparse(const DecisionRule& rule, int p, const std::vector<double>& r_grid,
                            int k, long n_mc, std::uint64_t seed);

/// Both psi(u) and psi'(u), as used by the SURE identity.
using PsiProvider = std::function<std::pair<double, double>(double u)>;

PsiProvider psi_identity_rule();                                // psi == 0 (MLE)
PsiProvider psi_james_stein(int p);                             // psi = (p-2)/u
PsiProvider psi_from_sample(const MixingSample& sample, int p); // variance identity
PsiProvider psi_betaprime_closed(int p);

/// SURE(delta) = p + B(u) at u = ||y||^2, with the excess-risk integrand
/// B(u) = psi^2 u - 2 p psi - 4 u psi'.
struct SureEvaluation {
    double u = 0.0;
    double psi = 0.0;
    double psi_prime = 0.0;
    double b_of_u = 0.0;
    double sure = 0.0;
};

SureEvaluation sure(const PsiProvider& psi_fn, int p, const std::vector<double>& y);
SureEvaluation sure_at(const PsiProvider& psi_fn, int p, double u);

/// theta_{r,k} = (r/sqrt(k), ..., r/sqrt(k), 0, ..., 0) with k nonzeros.
std::vector<double> sparse_theta(double r, int k, int p);

/// Sparsity levels {1,2,5,10,floor(.1p),floor(.2p),floor(.5p),p},
/// truncated to {1..p}, sorted, deduplicated.
std::vector<int> sparsity_grid(int p);

/// Long-format CSV: r,k,risk,stderr,rule,p,N_mc,K_dir,seed (k empty for
/// non-sparse curves). Multiple curves may share one file.
void write_risk_curves_csv(const std::vector<RiskCurve>& curves, std::ostream& out);
std::vector<RiskCurve> read_risk_curves_csv(std::istream& in);
void save_risk_curves(const std::vector<RiskCurve>& curves, const std::string& path);
std::vector<RiskCurve> load_risk_curves(const std::string& path);

} // namespace bnnlab

#endif
