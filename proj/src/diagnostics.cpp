#include "bnnlab/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

#include "bnnlab/predictive.hpp"
#include "bnnlab/special_functions.hpp"

namespace bnnlab {

double superharmonic_F(double a, double lambda) {
    if (!(a >= 3.0)) {
        throw std::domain_error("superharmonic_F: requires a >= 3 (p >= 5)");
    }
    if (!(lambda > 0.0)) {
        throw std::domain_error("superharmonic_F: requires lambda > 0");
    }
    const double log_e_term = a * std::log(lambda) - lambda;
    const double e_term = std::exp(log_e_term);
    return e_term + (2.0 * lambda - a) * lower_incomplete_gamma(a, lambda);
}

void RadialProfile::validate() const {
    if (r_grid.size() != values.size() || r_grid.size() < 3) {
        throw std::invalid_argument("RadialProfile: need at least three matched nodes");
    }
    if (!(step > 0.0)) {
        throw std::invalid_argument("RadialProfile: differencing step must be positive");
    }
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
        if (!(r_grid[i] > 0.0) || (i > 0 && !(r_grid[i] > r_grid[i - 1]))) {
            throw std::invalid_argument("RadialProfile: grid must be positive and increasing");
        }
        if (!(values[i] > 0.0)) {
            throw std::invalid_argument("RadialProfile: values must be positive");
        }
    }
    if (p < 2) {
        throw std::invalid_argument("RadialProfile: dimension must be >= 2");
    }
}

double radial_laplacian_sqrt(const RadialProfile& profile, std::size_t index) {
    profile.validate();
    if (index == 0 || index + 1 >= profile.r_grid.size()) {
        throw std::invalid_argument("radial_laplacian_sqrt: index must be interior");
    }
    const double h = profile.step;
    const double lo = profile.values[index - 1];
    const double mid = profile.values[index];
    const double hi = profile.values[index + 1];
    const double second = (hi - 2.0 * mid + lo) / (h * h);
    const double first = (hi - lo) / (2.0 * h);
    const double r = profile.r_grid[index];
    return second + (static_cast<double>(profile.p) - 1.0) / r * first;
}

double radial_laplacian_at(const std::function<double(double)>& phi, double r, int p) {
    if (!(r > 0.0)) {
        throw std::invalid_argument("radial_laplacian_at: requires r > 0");
    }
    const double h = 1e-3 * std::max(1.0, r);
    RadialProfile profile;
    profile.p = p;
    profile.step = h;
    profile.r_grid = {r - h, r, r + h};
    profile.values = {phi(r - h), phi(r), phi(r + h)};
    return radial_laplacian_sqrt(profile, 1);
}

std::vector<double> betaprime_sqrt_marginal_laplacians(int p,
                                                       const std::vector<double>& r_values) {
    PredictiveProblem problem;
    problem.p = p;
    problem.prior = PredictivePrior::beta_prime();
    problem.validate();
    const auto sqrt_marginal = [&](double r) {
        return std::sqrt(marginal_density_radial(r * r, 1.0, problem, 1.0, 1e-12));
    };
    std::vector<double> out(r_values.size());
    for (std::size_t i = 0; i < r_values.size(); ++i) {
        out[i] = radial_laplacian_at(sqrt_marginal, r_values[i], p);
    }
    return out;
}

double mixture_marginal_mean(const MixingSample& sample, int p, double r) {
    if (sample.draws.empty()) {
        throw std::invalid_argument("mixture_marginal_mean: mixing sample is empty");
    }
    const double log_two_pi = std::log(6.283185307179586476925286766559);
    const double half_r_sq = 0.5 * r * r;
    double total = 0.0;
    for (double v : sample.draws) {
        total += std::exp(-0.5 * p * (log_two_pi + std::log1p(v)) - half_r_sq / (1.0 + v));
    }
    return total / static_cast<double>(sample.draws.size());
}

std::vector<double> mixture_sqrt_marginal_laplacians(const MixingSample& sample, int p,
                                                     const std::vector<double>& r_values) {
    const auto sqrt_marginal = [&](double r) {
        const double m = mixture_marginal_mean(sample, p, r);
        if (!(m > 0.0)) {
            throw std::runtime_error("mixture_sqrt_marginal_laplacians: marginal underflowed");
        }
        return std::sqrt(m);
    };
    std::vector<double> out(r_values.size());
    for (std::size_t i = 0; i < r_values.size(); ++i) {
        out[i] = radial_laplacian_at(sqrt_marginal, r_values[i], p);
    }
    return out;
}

TailDecayFit tail_decay_probe(const MixingSample& sample, int p, int d,
                              const std::vector<double>& r_values) {
    if (sample.draws.empty()) {
        throw std::invalid_argument("tail_decay_probe: mixing sample is empty");
    }
    if (p < 1 || d < 1) {
        throw std::invalid_argument("tail_decay_probe: p and d must be positive");
    }
    if (r_values.size() < 3) {
        throw std::invalid_argument("tail_decay_probe: need at least three radii");
    }
    for (std::size_t i = 0; i < r_values.size(); ++i) {
        if (!(r_values[i] > 0.0) || (i > 0 && !(r_values[i] > r_values[i - 1]))) {
            throw std::invalid_argument("tail_decay_probe: radii must be positive increasing");
        }
    }

    TailDecayFit fit;
    fit.log_m_hat.resize(r_values.size());
    std::vector<double> xs(r_values.size());
    for (std::size_t i = 0; i < r_values.size(); ++i) {
        const double m_hat = mixture_marginal_mean(sample, p, r_values[i]);
        if (!(m_hat > 0.0)) {
            throw std::runtime_error("tail_decay_probe: marginal underflowed at r = " +
                                     std::to_string(r_values[i]));
        }
        fit.log_m_hat[i] = std::log(m_hat);
        xs[i] = std::pow(r_values[i], 2.0 / static_cast<double>(d));
    }

    // Ordinary least squares of log m_hat on r^{2/d}.
    const double n = static_cast<double>(xs.size());
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mean_x += xs[i];
        mean_y += fit.log_m_hat[i];
    }
    mean_x /= n;
    mean_y /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mean_x) * (xs[i] - mean_x);
        sxy += (xs[i] - mean_x) * (fit.log_m_hat[i] - mean_y);
    }
    fit.slope = sxy / sxx;
    fit.intercept = mean_y - fit.slope * mean_x;
    double rss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double resid = fit.log_m_hat[i] - (fit.intercept + fit.slope * xs[i]);
        rss += resid * resid;
    }
    if (xs.size() > 2) {
        fit.slope_stderr = std::sqrt(rss / (n - 2.0) / sxx);
    }
    return fit;
}

} // namespace bnnlab
