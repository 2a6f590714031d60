#ifndef BNNLAB_SHRINKAGE_HPP
#define BNNLAB_SHRINKAGE_HPP

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "bnnlab/mixing.hpp"

namespace bnnlab {

/// Posterior shrinkage weights over a mixing sample at s = ||y||^2:
/// w_m proportional to (1+V_m)^{-p/2} exp{-s / (2(1+V_m))}, evaluated as
/// log-weights with max subtraction. psi is the weighted mean of
/// 1/(1+V_m), a = 1 - psi, and psi' = -Var(1/(1+V)|s)/2.
struct ShrinkageMoments {
    double a = 0.0;
    double psi = 0.0;
    double psi_prime = 0.0;
};

ShrinkageMoments shrinkage_moments_mc(const MixingSample& sample, int p, double s);

/// E[V/(1+V) | ||Y||^2 = s] under the empirical mixing measure.
double shrink_mc(const MixingSample& sample, int p, double s);

/// (psi, psi') at s; psi' uses the conditional-variance identity.
/// Always 0 >= psi' >= -psi/2.
std::pair<double, double> psi_and_derivative(const MixingSample& sample, int p, double s);

/// Closed form for the BetaPrime(1, p/2-2) hyperprior:
/// a(s) = 1 - gamma(p-1, s/2) / ((s/2) gamma(p-2, s/2)), clamped to [0,1];
/// a(0) is the analytic limit 1/(p-1). Requires p >= 5.
double shrink_betaprime_closed(int p, double s);

/// (psi, psi') for the closed form, via the same variance identity with
/// E[(1+W)^{-2} | s] = gamma(p, s/2) / ((s/2)^2 gamma(p-2, s/2)).
std::pair<double, double> psi_and_derivative_betaprime(int p, double s);

/// Precomputed shrinkage grid with linear interpolation.
struct ShrinkageTable {
    int p = 0;
    std::vector<double> grid;    // strictly increasing, grid[0] == 0
    std::vector<double> values;  // a(s) in [0,1], clamped at construction
    std::string source;          // mixing spec string or "closed-form betaprime"

    double s_max() const { return grid.back(); }
};

/// Default grid resolution and extent: 2500 points on [0, (500+6*sqrt(p))^2].
std::size_t default_table_points();
double default_s_max(int p);

ShrinkageTable build_table(const MixingSample& sample, int p, std::size_t n_grid, double s_max);
ShrinkageTable build_table_betaprime(int p, std::size_t n_grid, double s_max);
ShrinkageTable build_table(const MixingSample& sample, int p);
ShrinkageTable build_table_betaprime(int p);

/// Linear interpolation; s beyond the grid returns the last node (flat).
double eval_table(const ShrinkageTable& table, double s);

/// CSV with a `# p=... source=... n_grid=... s_max=...` header and
/// `s,a` rows.
void write_shrinkage_table_csv(const ShrinkageTable& table, std::ostream& out);
ShrinkageTable read_shrinkage_table_csv(std::istream& in);
void save_shrinkage_table(const ShrinkageTable& table, const std::string& path);
ShrinkageTable load_shrinkage_table(const std::string& path);

} // namespace bnnlab

#endif
