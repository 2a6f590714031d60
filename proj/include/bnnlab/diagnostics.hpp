#ifndef BNNLAB_DIAGNOSTICS_HPP
#define BNNLAB_DIAGNOSTICS_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "bnnlab/mixing.hpp"

namespace bnnlab {

/// F(lambda) = lambda^a e^{-lambda} + (2 lambda - a) gamma(a, lambda),
/// a = p - 2. Strict positivity for all lambda > 0 is the minimaxity
/// criterion of the BetaPrime-hyperprior marginal. The first term is
/// assembled in log space so it degrades gracefully to 0 for large
/// lambda.
double superharmonic_F(double a, double lambda);

/// Radial profile of a positive function (m or sqrt(m)) on a uniform
/// grid, with the differencing step recorded.
struct RadialProfile {
    std::vector<double> r_grid;   // strictly increasing, positive
    std::vector<double> values;   // positive
    int p = 0;
    double step = 0.0;

    void validate() const;
};

/// Central-difference Laplacian of the radial profile at an interior
/// node: phi'' + (p-1)/r phi'.
double radial_laplacian_sqrt(const RadialProfile& profile, std::size_t index);

/// Builds the three-point profile {r-h, r, r+h} of phi(r) and returns the
/// differenced Laplacian at r, with h = 1e-3 * max(1, r).
double radial_laplacian_at(const std::function<double(double)>& phi, double r, int p);

/// Laplacian of sqrt(m) for the BetaPrime-hyperprior marginal (unit noise
/// variance, quadrature marginal at 1e-12 relative error) at each radius.
/// The theory says every value is <= 0; the acceptance threshold allows
/// 1e-6 of differencing noise.
std::vector<double> betaprime_sqrt_marginal_laplacians(int p, const std::vector<double>& r_values);

/// V-mixture estimate of the marginal at radius r:
/// mean over draws of (2 pi (1+V_m))^{-p/2} exp(-r^2 / (2(1+V_m))).
double mixture_marginal_mean(const MixingSample& sample, int p, double r);

/// Probe for non-superharmonicity of sqrt(m) under an empirical mixing
/// measure (fixed-scale or dropout): differenced Laplacian of
/// sqrt(m_hat) at each radius. Positive values are reported, not
/// asserted; the violation region is not pinned down by theory.
std::vector<double> mixture_sqrt_marginal_laplacians(const MixingSample& sample, int p,
                                                     const std::vector<double>& r_values);

struct TailDecayFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    std::vector<double> log_m_hat;  // one entry per probed radius
};

/// Probes the stretched-exponential tail of the fixed-scale marginal:
/// m_hat(r) = mean over the sample of (2 pi (1+V_m))^{-p/2}
/// exp(-r^2 / (2(1+V_m))), then least-squares fit of log m_hat against
/// r^{2/d}. A negative slope is compatible with exp(-kappa r^{2/d})
/// decay. Throws if any m_hat underflows to zero.
TailDecayFit tail_decay_probe(const MixingSample& sample, int p, int d,
                              const std::vector<double>& r_values);

} // namespace bnnlab

#endif
