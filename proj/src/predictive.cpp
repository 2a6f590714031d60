#include "bnnlab/predictive.hpp"

#include <cmath>
#include <stdexcept>

#include "bnnlab/estimators.hpp"
#include "bnnlab/quadrature.hpp"

namespace bnnlab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double log_gaussian_density(double dist_sq, double variance, int p) {
    return -0.5 * static_cast<double>(p) * std::log(kTwoPi * variance) -
           dist_sq / (2.0 * variance);
}

} // namespace

void PredictiveProblem::validate() const {
    if (!(v_x > 0.0) || !(v_y > 0.0)) {
        throw std::invalid_argument("PredictiveProblem: observation variances must be positive");
    }
    if (prior.kind == PredictivePriorKind::BetaPrime) {
        if (p < 5) {
            throw std::invalid_argument("PredictiveProblem: BetaPrime prior requires p >= 5");
        }
    } else {
        if (p < 1) {
            throw std::invalid_argument("PredictiveProblem: dimension must be positive");
        }
        if (!(prior.point_variance >= 0.0)) {
            throw std::invalid_argument("PredictiveProblem: point-mass variance must be >= 0");
        }
    }
}

double marginal_density_radial(double z_norm_sq, double v, const PredictiveProblem& problem,
                               double prior_scale, double rel_tol) {
    problem.validate();
    if (!(v > 0.0)) {
        throw std::invalid_argument("marginal_density: noise variance must be positive");
    }
    if (!(prior_scale > 0.0)) {
        throw std::invalid_argument("marginal_density: prior scale must be positive");
    }
    const int p = problem.p;
    if (problem.prior.kind == PredictivePriorKind::PointMass) {
        const double total = v + prior_scale * problem.prior.point_variance;
        return std::exp(log_gaussian_density(z_norm_sq, total, p));
    }

    // int_0^inf phi_p(z; 0, (v + c w) I) b (1+w)^{-(b+1)} dw under
    // t = 1/(v + c w) becomes
    // (2 pi)^{-p/2} b c^b int_0^{1/v} t^{p-3} ((c - v) t + 1)^{-(p/2 - 1)}
    //                                 exp(-||z||^2 t / 2) dt.
    const double b = 0.5 * p - 2.0;
    const double c = prior_scale;
    const double power_t = static_cast<double>(p) - 3.0;
    const double power_lin = -(0.5 * p - 1.0);
    const double half_norm = 0.5 * z_norm_sq;
    const double lin_coeff = c - v;
    const auto integrand = [=](double t) {
        return std::pow(t, power_t) * std::pow(lin_coeff * t + 1.0, power_lin) *
               std::exp(-half_norm * t);
    };
    const QuadratureResult q = integrate_adaptive(integrand, 0.0, 1.0 / v, rel_tol);
    const double prefactor =
        std::exp(-0.5 * p * std::log(kTwoPi) + std::log(b) + b * std::log(c));
    return prefactor * q.value;
}

double marginal_density(const std::vector<double>& z, double v, const PredictiveProblem& problem,
                        double prior_scale) {
    return marginal_density_radial(squared_norm(z), v, problem, prior_scale);
}

namespace {

double distance_sq(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

void check_pair(const std::vector<double>& y, const std::vector<double>& x,
                const PredictiveProblem& problem) {
    if (y.size() != x.size() || static_cast<int>(y.size()) != problem.p) {
        throw std::invalid_argument("predictive_density: dimension mismatch");
    }
}

} // namespace

double log_unbiased_predictive_density(const std::vector<double>& y, const std::vector<double>& x,
                                       const PredictiveProblem& problem) {
    check_pair(y, x, problem);
    return log_gaussian_density(distance_sq(y, x), problem.v_x + problem.v_y, problem.p);
}

double unbiased_predictive_density(const std::vector<double>& y, const std::vector<double>& x,
                                   const PredictiveProblem& problem) {
    return std::exp(log_unbiased_predictive_density(y, x, problem));
}

double log_predictive_density(const std::vector<double>& y, const std::vector<double>& x,
                              const PredictiveProblem& problem) {
    check_pair(y, x, problem);
    const double vx = problem.v_x;
    const double vy = problem.v_y;
    std::vector<double> w(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        w[i] = (vy * x[i] + vx * y[i]) / (vx + vy);
    }
    const double m_w = marginal_density(w, problem.v_w(), problem);
    const double m_x = marginal_density(x, vx, problem);
    return std::log(m_w) - std::log(m_x) + log_unbiased_predictive_density(y, x, problem);
}

double predictive_density(const std::vector<double>& y, const std::vector<double>& x,
                          const PredictiveProblem& problem) {
    return std::exp(log_predictive_density(y, x, problem));
}

KlRiskEstimate kl_risk_mc(const PredictiveProblem& problem, PredictiveEstimator estimator,
                          const std::vector<double>& theta, long n_outer, long n_inner,
                          std::uint64_t seed) {
    problem.validate();
    if (static_cast<int>(theta.size()) != problem.p) {
        throw std::invalid_argument("kl_risk_mc: theta dimension mismatch");
    }
    if (n_outer < 2 || n_inner < 2) {
        throw std::invalid_argument("kl_risk_mc: need at least two outer and inner draws");
    }

    const int p = problem.p;
    const double sd_x = std::sqrt(problem.v_x);
    const double sd_y = std::sqrt(problem.v_y);
    RandomStream rng = RandomStream::derive(seed, 0x6b6c726bULL /* "klrk" */);

    std::vector<double> x(theta.size());
    std::vector<double> y(theta.size());
    std::vector<double> w(theta.size());
    double sum = 0.0;
    double sum_sq = 0.0;
    for (long i = 0; i < n_outer; ++i) {
        for (std::size_t j = 0; j < x.size(); ++j) {
            x[j] = theta[j] + sd_x * rng.normal();
        }
        // The denominator marginal depends on x only; hoist it out of the
        // inner loop.
        double log_m_x = 0.0;
        if (estimator == PredictiveEstimator::Bayes) {
            log_m_x = std::log(marginal_density(x, problem.v_x, problem));
        }
        double inner_sum = 0.0;
        for (long k = 0; k < n_inner; ++k) {
            for (std::size_t j = 0; j < y.size(); ++j) {
                y[j] = theta[j] + sd_y * rng.normal();
            }
            const double log_true = log_gaussian_density(distance_sq(y, theta), problem.v_y, p);
            double log_estimate = 0.0;
            switch (estimator) {
                case PredictiveEstimator::Bayes: {
                    for (std::size_t j = 0; j < w.size(); ++j) {
                        w[j] = (problem.v_y * x[j] + problem.v_x * y[j]) / (problem.v_x + problem.v_y);
                    }
                    log_estimate = std::log(marginal_density(w, problem.v_w(), problem)) -
                                   log_m_x + log_unbiased_predictive_density(y, x, problem);
                    break;
                }
                case PredictiveEstimator::Unbiased:
                    log_estimate = log_unbiased_predictive_density(y, x, problem);
                    break;
                case PredictiveEstimator::TrueDensity:
                    log_estimate = log_true;
                    break;
            }
            inner_sum += log_true - log_estimate;
        }
        const double g = inner_sum / static_cast<double>(n_inner);
        sum += g;
        sum_sq += g * g;
    }
    const double n = static_cast<double>(n_outer);
    const double mean = sum / n;
    const double variance = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
    return {mean, std::sqrt(variance / n)};
}

} // namespace bnnlab
