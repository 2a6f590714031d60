#ifndef BNNLAB_PREDICTIVE_HPP
#define BNNLAB_PREDICTIVE_HPP

#include <cstdint>
#include <vector>

#include "bnnlab/random.hpp"

namespace bnnlab {

/// Prior on theta for the predictive problem: either the BetaPrime(1,
/// p/2-2) scale mixture of Section-3 form, or a Gaussian point-mass-
/// variance prior N(0, w0 I) used as a conjugate oracle mode (w0 = 0
/// degenerates to the prior concentrated at the origin).
enum class PredictivePriorKind { BetaPrime, PointMass };

struct PredictivePrior {
    PredictivePriorKind kind = PredictivePriorKind::BetaPrime;
    double point_variance = 0.0;  // PointMass only

    static PredictivePrior beta_prime() { return {PredictivePriorKind::BetaPrime, 0.0}; }
    static PredictivePrior point_mass(double w0) { return {PredictivePriorKind::PointMass, w0}; }
};

/// X ~ N_p(theta, v_x I) observed; estimate the density of Y ~ N_p(theta,
/// v_y I) under KL loss.
struct PredictiveProblem {
    int p = 5;
    double v_x = 1.0;
    double v_y = 1.0;
    PredictivePrior prior;

    double v_w() const { return v_x * v_y / (v_x + v_y); }
    void validate() const;
};

/// Marginal density of z under noise variance v:
/// m(z; v) = int phi_p(z; 0, (v + c w) I) h(w) dw, with the prior mixing
/// variable scaled by prior_scale = c (c != 1 arises only in the variance-
/// rescaling identity). BetaPrime marginals are computed by adaptive
/// quadrature after the substitution t = 1/(v + c w), to relative error
/// 1e-8; the point-mass marginal is the Gaussian closed form. Depends on
/// z only through ||z||.
double marginal_density(const std::vector<double>& z, double v, const PredictiveProblem& problem,
                        double prior_scale = 1.0);
double marginal_density_radial(double z_norm_sq, double v, const PredictiveProblem& problem,
                               double prior_scale = 1.0, double rel_tol = 1e-8);

/// Bayes predictive density
/// phat(y|x) = m(w; v_w)/m(x; v_x) * phat_U(y|x),
/// w = (v_y x + v_x y)/(v_x + v_y). Any prior normalization cancels in
/// the ratio.
double predictive_density(const std::vector<double>& y, const std::vector<double>& x,
                          const PredictiveProblem& problem);
double log_predictive_density(const std::vector<double>& y, const std::vector<double>& x,
                              const PredictiveProblem& problem);

/// phat_U(y|x) = N(y; x, (v_x + v_y) I), the best invariant density.
double unbiased_predictive_density(const std::vector<double>& y, const std::vector<double>& x,
                                   const PredictiveProblem& problem);
double log_unbiased_predictive_density(const std::vector<double>& y, const std::vector<double>& x,
                                       const PredictiveProblem& problem);

enum class PredictiveEstimator {
    Bayes,        // ratio formula under problem.prior
    Unbiased,     // phat_U
    TrueDensity,  // oracle: the true p(.|theta); KL risk is identically 0
};

struct KlRiskEstimate {
    double risk = 0.0;
    double stderr_ = 0.0;
};

/// Nested Monte Carlo estimate of
/// R_KL(theta, phat) = E_X E_Y log(p(Y|theta)/phat(Y|X)).
/// n_outer draws of X, n_inner draws of Y per X; the standard error comes
/// from the outer replicates. Deterministic in seed.
KlRiskEstimate kl_risk_mc(const PredictiveProblem& problem, PredictiveEstimator estimator,
                          const std::vector<double>& theta, long n_outer, long n_inner,
                          std::uint64_t seed);

} // namespace bnnlab

#endif
