#include "bnnlab/risk.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <memory>
#include <ostream>
#include <stdexcept>

#include "bnnlab/text.hpp"

namespace bnnlab {

namespace {

constexpr std::uint64_t kMcRiskTag = 0x6d637273ULL;    // "mcrs"
constexpr std::uint64_t kDirectionTag = 0x64697265ULL; // "dire"

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = seed;
    std::uint64_t z = splitmix64(s);
    s ^= a;
    z ^= splitmix64(s);
    s ^= b;
    z ^= splitmix64(s);
    return z;
}

} // namespace

RiskEstimate mc_risk(const DecisionRule& rule, const std::vector<double>& theta, long n_mc,
                     std::uint64_t seed) {
    if (n_mc < 2) {
        throw std::invalid_argument("mc_risk: need at least two Monte Carlo draws");
    }
    RandomStream rng = RandomStream::derive(seed, kMcRiskTag);
    std::optional<HorseshoeState> horseshoe_state;
    const std::size_t p = theta.size();
    std::vector<double> y(p);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (long i = 0; i < n_mc; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            y[j] = theta[j] + rng.normal();
        }
        const std::vector<double> estimate = apply_with_state(rule, y, &rng, horseshoe_state);
        double loss = 0.0;
        for (std::size_t j = 0; j < p; ++j) {
            const double d = estimate[j] - theta[j];
            loss += d * d;
        }
        sum += loss;
        sum_sq += loss * loss;
    }
    const double n = static_cast<double>(n_mc);
    const double mean = sum / n;
    const double variance = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
    return {mean, std::sqrt(variance / n)};
}

namespace {

RiskCurve curve_skeleton(const DecisionRule& rule, int p, const std::vector<double>& r_grid,
                         int k_dir, long n_mc, std::uint64_t seed) {
    if (p < 1) {
        throw std::invalid_argument("risk_curve: dimension must be positive");
    }
    if (k_dir < 1) {
        throw std::invalid_argument("risk_curve: need at least one direction");
    }
    for (double r : r_grid) {
        if (!(r >= 0.0)) {
            throw std::invalid_argument("risk_curve: signal norms must be nonnegative");
        }
    }
    RiskCurve curve;
    curve.p = p;
    curve.r_grid = r_grid;
    curve.rule_label = rule.label;
    curve.n_mc = n_mc;
    curve.k_dir = k_dir;
    curve.seed = seed;
    curve.risks.resize(r_grid.size());
    curve.stderrs.resize(r_grid.size());
    return curve;
}

/// Combines per-direction estimates: within-direction variance plus a
/// moment-matched between-direction component (law of total variance).
RiskEstimate combine_directions(const std::vector<RiskEstimate>& estimates) {
    const std::size_t k = estimates.size();
    if (k == 1) {
        return estimates[0];
    }
    double mean = 0.0;
    double mean_within_var = 0.0;
    for (const auto& e : estimates) {
        mean += e.risk;
        mean_within_var += e.stderr_ * e.stderr_;
    }
    mean /= static_cast<double>(k);
    mean_within_var /= static_cast<double>(k);
    double sample_var = 0.0;
    for (const auto& e : estimates) {
        const double d = e.risk - mean;
        sample_var += d * d;
    }
    sample_var /= static_cast<double>(k - 1);
    const double between_var = std::max(0.0, sample_var - mean_within_var);
    const double total = mean_within_var / static_cast<double>(k) +
                         between_var / static_cast<double>(k);
    return {mean, std::sqrt(total)};
}

} // namespace

RiskCurve risk_curve(const DecisionRule& rule, int p, const std::vector<double>& r_grid,
                     int k_dir, long n_mc, std::uint64_t seed) {
    RiskCurve curve = curve_skeleton(rule, p, r_grid, k_dir, n_mc, seed);
    std::vector<double> theta(static_cast<std::size_t>(p));
    for (std::size_t ri = 0; ri < r_grid.size(); ++ri) {
        const double r = r_grid[ri];
        // Direction is irrelevant at the origin: a single task whose seed
        // equals the curve seed, so the entry coincides with
        // mc_risk(rule, 0, n_mc, seed).
        const int directions = (r == 0.0) ? 1 : k_dir;
        std::vector<RiskEstimate> estimates;
        estimates.reserve(static_cast<std::size_t>(directions));
        for (int j = 0; j < directions; ++j) {
            const std::uint64_t task_seed =
                (r == 0.0) ? seed : mix_seed(seed, ri + 1, static_cast<std::uint64_t>(j) + 1);
            if (r == 0.0) {
                std::fill(theta.begin(), theta.end(), 0.0);
            } else {
                RandomStream dir_rng = RandomStream::derive(task_seed, kDirectionTag);
                double norm_sq = 0.0;
                for (auto& t : theta) {
                    t = dir_rng.normal();
                    norm_sq += t * t;
                }
                const double scale = r / std::sqrt(norm_sq);
                for (auto& t : theta) {
                    t *= scale;
                }
            }
            estimates.push_back(mc_risk(rule, theta, n_mc, task_seed));
        }
        const RiskEstimate combined = combine_directions(estimates);
        curve.risks[ri] = combined.risk;
        curve.stderrs[ri] = combined.stderr_;
    }
    return curve;
}

RiskCurve risk_curve_sparse(const DecisionRule& rule, int p, const std::vector<double>& r_grid,
                            int k, long n_mc, std::uint64_t seed) {
    RiskCurve curve = curve_skeleton(rule, p, r_grid, 1, n_mc, seed);
    curve.sparsity = k;
    for (std::size_t ri = 0; ri < r_grid.size(); ++ri) {
        const std::vector<double> theta = sparse_theta(r_grid[ri], k, p);
        const std::uint64_t task_seed = mix_seed(seed, ri + 1, static_cast<std::uint64_t>(k));
        const RiskEstimate estimate = mc_risk(rule, theta, n_mc, task_seed);
        curve.risks[ri] = estimate.risk;
        curve.stderrs[ri] = estimate.stderr_;
    }
    return curve;
}

PsiProvider psi_identity_rule() {
    return [](double) { return std::pair<double, double>{0.0, 0.0}; };
}

PsiProvider psi_james_stein(int p) {
    if (p < 3) {
        throw std::invalid_argument("psi_james_stein: requires p >= 3");
    }
    const double c = static_cast<double>(p) - 2.0;
    return [c](double u) {
        if (u == 0.0) {
            return std::pair<double, double>{0.0, 0.0};
        }
        return std::pair<double, double>{c / u, -c / (u * u)};
    };
}

PsiProvider psi_from_sample(const MixingSample& sample, int p) {
    auto shared = std::make_shared<MixingSample>(sample);
    return [shared, p](double u) { return psi_and_derivative(*shared, p, u); };
}

PsiProvider psi_betaprime_closed(int p) {
    if (p < 5) {
        throw std::invalid_argument("psi_betaprime_closed: requires p >= 5");
    }
    return [p](double u) { return psi_and_derivative_betaprime(p, u); };
}

SureEvaluation sure_at(const PsiProvider& psi_fn, int p, double u) {
    if (p < 1) {
        throw std::invalid_argument("sure: dimension must be positive");
    }
    if (!(u >= 0.0)) {
        throw std::invalid_argument("sure: u must be nonnegative");
    }
    SureEvaluation eval;
    eval.u = u;
    std::tie(eval.psi, eval.psi_prime) = psi_fn(u);
    eval.b_of_u = eval.psi * eval.psi * u - 2.0 * static_cast<double>(p) * eval.psi -
                  4.0 * u * eval.psi_prime;
    eval.sure = static_cast<double>(p) + eval.b_of_u;
    return eval;
}

SureEvaluation sure(const PsiProvider& psi_fn, int p, const std::vector<double>& y) {
    return sure_at(psi_fn, p, squared_norm(y));
}

std::vector<double> sparse_theta(double r, int k, int p) {
    if (!(r >= 0.0)) {
        throw std::domain_error("sparse_theta: r must be nonnegative");
    }
    if (k < 1 || k > p) {
        throw std::domain_error("sparse_theta: sparsity k must lie in [1, p]");
    }
    std::vector<double> theta(static_cast<std::size_t>(p), 0.0);
    const double value = r / std::sqrt(static_cast<double>(k));
    for (int i = 0; i < k; ++i) {
        theta[static_cast<std::size_t>(i)] = value;
    }
    return theta;
}

std::vector<int> sparsity_grid(int p) {
    if (p < 1) {
        throw std::invalid_argument("sparsity_grid: dimension must be positive");
    }
    std::vector<int> levels = {1, 2, 5, 10, p / 10, p / 5, p / 2, p};
    std::erase_if(levels, [p](int k) { return k < 1 || k > p; });
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    return levels;
}

void write_risk_curves_csv(const std::vector<RiskCurve>& curves, std::ostream& out) {
    out << "r,k,risk,stderr,rule,p,N_mc,K_dir,seed\n";
    for (const auto& curve : curves) {
        const std::string k_field = curve.sparsity ? std::to_string(*curve.sparsity) : "";
        for (std::size_t i = 0; i < curve.r_grid.size(); ++i) {
            out << format_double(curve.r_grid[i]) << "," << k_field << ","
                << format_double(curve.risks[i]) << "," << format_double(curve.stderrs[i]) << ","
                << curve.rule_label << "," << curve.p << "," << curve.n_mc << "," << curve.k_dir
                << "," << curve.seed << "\n";
        }
    }
}

std::vector<RiskCurve> read_risk_curves_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "r,k,risk,stderr,rule,p,N_mc,K_dir,seed") {
        throw std::runtime_error("read_risk_curves_csv: bad header");
    }
    std::vector<RiskCurve> curves;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() != 9) {
            throw std::runtime_error("read_risk_curves_csv: bad row '" + line + "'");
        }
        std::optional<int> k;
        if (!fields[1].empty()) {
            k = static_cast<int>(parse_int(fields[1]));
        }
        const std::string& rule = fields[4];
        const int p = static_cast<int>(parse_int(fields[5]));
        const long n_mc = static_cast<long>(parse_int(fields[6]));
        const int k_dir = static_cast<int>(parse_int(fields[7]));
        const std::uint64_t seed = parse_uint64(fields[8]);

        const bool continues = !curves.empty() && curves.back().rule_label == rule &&
                               curves.back().sparsity == k && curves.back().p == p &&
                               curves.back().n_mc == n_mc && curves.back().k_dir == k_dir &&
                               curves.back().seed == seed;
        if (!continues) {
            RiskCurve curve;
            curve.p = p;
            curve.sparsity = k;
            curve.rule_label = rule;
            curve.n_mc = n_mc;
            curve.k_dir = k_dir;
            curve.seed = seed;
            curves.push_back(std::move(curve));
        }
        curves.back().r_grid.push_back(parse_double(fields[0]));
        curves.back().risks.push_back(parse_double(fields[2]));
        curves.back().stderrs.push_back(parse_double(fields[3]));
    }
    return curves;
}

void save_risk_curves(const std::vector<RiskCurve>& curves, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("save_risk_curves: cannot open " + path);
    }
    write_risk_curves_csv(curves, out);
}

std::vector<RiskCurve> load_risk_curves(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("load_risk_curves: cannot open " + path);
    }
    return read_risk_curves_csv(in);
}

} // namespace bnnlab
