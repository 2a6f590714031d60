#ifndef BNNLAB_HORSESHOE_HPP
#define BNNLAB_HORSESHOE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "bnnlab/random.hpp"

namespace bnnlab {

/// Chain settings for the horseshoe Gibbs sampler.
struct HorseshoeConfig {
    int iterations = 3000;
    int burn_in = 1000;
    int thin = 2;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Sampler state under the half-Cauchy scale-mixture representation:
/// theta_i ~ N(0, lambda_i^2 tau^2), lambda_i ~ C+(0,1), tau ~ C+(0,1),
/// with inverse-gamma auxiliaries nu_i (per coordinate) and xi (global).
struct HorseshoeState {
    std::vector<double> theta;
    std::vector<double> lambda_sq;
    std::vector<double> nu;
    double tau_sq = 1.0;
    double xi = 1.0;

    /// Deterministic cold start: theta = y, all scales and auxiliaries 1.
    static HorseshoeState cold_start(const std::vector<double>& y);
};

/// Gaussian full-conditional means of theta given the current scales:
/// m_i = v_i y_i with v_i = lambda_i^2 tau^2 / (1 + lambda_i^2 tau^2).
std::vector<double> horseshoe_conditional_means(const HorseshoeState& state,
                                                const std::vector<double>& y);

/// One full sweep: theta from its Gaussian conditionals, then lambda^2,
/// nu, tau^2, xi from their inverse-gamma conditionals. Unit noise
/// variance; variance draws are floored at 1e-300.
void gibbs_step(HorseshoeState& state, const std::vector<double>& y, RandomStream& rng);

struct HorseshoeEstimate {
    std::vector<double> estimate;  // Rao-Blackwellized posterior mean
    HorseshoeState final_state;    // for warm-starting the next replication
    std::vector<double> raw_theta_mean;  // plain average of sampled theta (diagnostics)
};

/// Runs the chain and averages the conditional means (not the sampled
/// coordinates) over retained sweeps. A warm start replaces the cold
/// initial state.
HorseshoeEstimate horseshoe_posterior_mean(const std::vector<double>& y,
                                           const HorseshoeConfig& config,
                                           const std::optional<HorseshoeState>& warm_start,
                                           RandomStream& rng);

} // namespace bnnlab

#endif
