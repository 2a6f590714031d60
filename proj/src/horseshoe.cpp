#include "bnnlab/horseshoe.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bnnlab {

namespace {

constexpr double kVarianceFloor = 1e-300;

// X ~ InverseGamma(shape, scale): 1/X ~ Gamma(shape, rate scale).
double inverse_gamma_draw(RandomStream& rng, double shape, double scale) {
    const double g = (shape == 1.0) ? rng.exponential() : rng.gamma(shape);
    return std::max(kVarianceFloor, scale / g);
}

} // namespace

void HorseshoeConfig::validate() const {
    if (iterations < 1 || burn_in < 0 || burn_in >= iterations) {
        throw std::invalid_argument("HorseshoeConfig: need 0 <= burn_in < iterations");
    }
    if (thin < 1) {
        throw std::invalid_argument("HorseshoeConfig: thin must be >= 1");
    }
}

HorseshoeState HorseshoeState::cold_start(const std::vector<double>& y) {
    HorseshoeState state;
    state.theta = y;
    state.lambda_sq.assign(y.size(), 1.0);
    state.nu.assign(y.size(), 1.0);
    state.tau_sq = 1.0;
    state.xi = 1.0;
    return state;
}

std::vector<double> horseshoe_conditional_means(const HorseshoeState& state,
                                                const std::vector<double>& y) {
    if (state.lambda_sq.size() != y.size()) {
        throw std::invalid_argument("horseshoe: state/observation dimension mismatch");
    }
    std::vector<double> means(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double prior_var = state.lambda_sq[i] * state.tau_sq;
        const double v = prior_var / (1.0 + prior_var);
        means[i] = v * y[i];
    }
    return means;
}

void gibbs_step(HorseshoeState& state, const std::vector<double>& y, RandomStream& rng) {
    const std::size_t p = y.size();
    if (state.theta.size() != p || state.lambda_sq.size() != p || state.nu.size() != p) {
        throw std::invalid_argument("gibbs_step: state/observation dimension mismatch");
    }

    // theta_i | lambda, tau, y ~ N(v_i y_i, v_i), v_i = l2 t2 / (1 + l2 t2)
    for (std::size_t i = 0; i < p; ++i) {
        const double prior_var = state.lambda_sq[i] * state.tau_sq;
        const double v = prior_var / (1.0 + prior_var);
        state.theta[i] = v * y[i] + std::sqrt(v) * rng.normal();
    }

    // lambda_i^2 | . ~ IG(1, 1/nu_i + theta_i^2 / (2 tau^2))
    for (std::size_t i = 0; i < p; ++i) {
        const double scale = 1.0 / state.nu[i] + state.theta[i] * state.theta[i] / (2.0 * state.tau_sq);
        state.lambda_sq[i] = inverse_gamma_draw(rng, 1.0, scale);
    }

    // nu_i | . ~ IG(1, 1 + 1/lambda_i^2)
    for (std::size_t i = 0; i < p; ++i) {
        state.nu[i] = inverse_gamma_draw(rng, 1.0, 1.0 + 1.0 / state.lambda_sq[i]);
    }

    // tau^2 | . ~ IG((p+1)/2, 1/xi + (1/2) sum theta_i^2 / lambda_i^2)
    double quad = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
        quad += state.theta[i] * state.theta[i] / state.lambda_sq[i];
    }
    state.tau_sq = inverse_gamma_draw(rng, 0.5 * (static_cast<double>(p) + 1.0),
                                      1.0 / state.xi + 0.5 * quad);

    // xi | . ~ IG(1, 1 + 1/tau^2)
    state.xi = inverse_gamma_draw(rng, 1.0, 1.0 + 1.0 / state.tau_sq);
}

HorseshoeEstimate horseshoe_posterior_mean(const std::vector<double>& y,
                                           const HorseshoeConfig& config,
                                           const std::optional<HorseshoeState>& warm_start,
                                           RandomStream& rng) {
    config.validate();
    HorseshoeState state = warm_start ? *warm_start : HorseshoeState::cold_start(y);
    if (state.theta.size() != y.size()) {
        throw std::invalid_argument("horseshoe_posterior_mean: warm start dimension mismatch");
    }

    const std::size_t p = y.size();
    std::vector<double> rb_accum(p, 0.0);
    std::vector<double> raw_accum(p, 0.0);
    long retained = 0;
    for (int t = 0; t < config.iterations; ++t) {
        const bool retain = t >= config.burn_in && (t - config.burn_in) % config.thin == 0;
        if (retain) {
            // Conditional means under the scales this sweep's theta update
            // conditions on (the scales at sweep entry).
            for (std::size_t i = 0; i < p; ++i) {
                const double prior_var = state.lambda_sq[i] * state.tau_sq;
                rb_accum[i] += prior_var / (1.0 + prior_var) * y[i];
            }
        }
        gibbs_step(state, y, rng);
        if (retain) {
            for (std::size_t i = 0; i < p; ++i) {
                raw_accum[i] += state.theta[i];
            }
            ++retained;
        }
    }

    HorseshoeEstimate out;
    out.estimate.resize(p);
    out.raw_theta_mean.resize(p);
    for (std::size_t i = 0; i < p; ++i) {
        out.estimate[i] = rb_accum[i] / static_cast<double>(retained);
        out.raw_theta_mean[i] = raw_accum[i] / static_cast<double>(retained);
    }
    out.final_state = std::move(state);
    return out;
}

} // namespace bnnlab
