#include "bnnlab/shrinkage.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string_view>

#include "bnnlab/special_functions.hpp"
#include "bnnlab/text.hpp"

namespace bnnlab {

namespace {

struct PreparedDraws {
    std::vector<double> log1p_v;
    std::vector<double> inv1p_v;
};

PreparedDraws prepare(const MixingSample& sample) {
    PreparedDraws prep;
    prep.log1p_v.resize(sample.draws.size());
    prep.inv1p_v.resize(sample.draws.size());
    for (std::size_t m = 0; m < sample.draws.size(); ++m) {
        const double v = sample.draws[m];
        if (!(v >= 0.0)) {
            throw std::invalid_argument("shrinkage: mixing draws must be nonnegative");
        }
        prep.log1p_v[m] = std::log1p(v);
        prep.inv1p_v[m] = 1.0 / (1.0 + v);
    }
    return prep;
}

ShrinkageMoments moments_prepared(const PreparedDraws& prep, int p, double s) {
    const double c_log = -0.5 * static_cast<double>(p);
    const double c_inv = -0.5 * s;
    const std::size_t m = prep.log1p_v.size();

    double max_lw = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
        const double lw = c_log * prep.log1p_v[i] + c_inv * prep.inv1p_v[i];
        max_lw = std::max(max_lw, lw);
    }

    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double lw = c_log * prep.log1p_v[i] + c_inv * prep.inv1p_v[i];
        const double w = std::exp(lw - max_lw);
        const double x = prep.inv1p_v[i];
        s0 += w;
        s1 += w * x;
        s2 += w * x * x;
    }
    // Max subtraction guarantees at least one unit weight.
    assert(s0 >= 1.0);

    ShrinkageMoments out;
    out.psi = std::clamp(s1 / s0, 0.0, 1.0);
    out.a = 1.0 - out.psi;
    const double variance = std::max(0.0, s2 / s0 - out.psi * out.psi);
    out.psi_prime = -0.5 * variance;
    return out;
}

void check_mc_args(const MixingSample& sample, int p, double s) {
    if (sample.draws.empty()) {
        throw std::invalid_argument("shrinkage: mixing sample is empty");
    }
    if (p < 1) {
        throw std::invalid_argument("shrinkage: dimension must be >= 1");
    }
    if (!(s >= 0.0)) {
        throw std::invalid_argument("shrinkage: s must be nonnegative");
    }
}

} // namespace

ShrinkageMoments shrinkage_moments_mc(const MixingSample& sample, int p, double s) {
    check_mc_args(sample, p, s);
    return moments_prepared(prepare(sample), p, s);
}

double shrink_mc(const MixingSample& sample, int p, double s) {
    return shrinkage_moments_mc(sample, p, s).a;
}

std::pair<double, double> psi_and_derivative(const MixingSample& sample, int p, double s) {
    const ShrinkageMoments m = shrinkage_moments_mc(sample, p, s);
    return {m.psi, m.psi_prime};
}

namespace {

// psi(s) = gamma(a+1, lambda) / (lambda gamma(a, lambda)), a = p-2,
// lambda = s/2, evaluated as a log-space ratio so the incomplete gammas
// can underflow individually without touching the quotient.
double betaprime_psi(int p, double lambda) {
    const double a = static_cast<double>(p) - 2.0;
    return std::exp(log_lower_incomplete_gamma(a + 1.0, lambda) - std::log(lambda) -
                    log_lower_incomplete_gamma(a, lambda));
}

} // namespace

double shrink_betaprime_closed(int p, double s) {
    if (p < 5) {
        throw std::domain_error("shrink_betaprime_closed: requires p >= 5");
    }
    if (!(s >= 0.0)) {
        throw std::domain_error("shrink_betaprime_closed: s must be nonnegative");
    }
    if (s == 0.0) {
        return 1.0 / (static_cast<double>(p) - 1.0);
    }
    const double psi = betaprime_psi(p, 0.5 * s);
    return std::clamp(1.0 - psi, 0.0, 1.0);
}

std::pair<double, double> psi_and_derivative_betaprime(int p, double s) {
    if (p < 5) {
        throw std::domain_error("psi_and_derivative_betaprime: requires p >= 5");
    }
    if (!(s >= 0.0)) {
        throw std::domain_error("psi_and_derivative_betaprime: s must be nonnegative");
    }
    const double a = static_cast<double>(p) - 2.0;
    if (s == 0.0) {
        // limits: psi -> a/(a+1), E[(1+W)^{-2}] -> a/(a+2)
        const double psi = a / (a + 1.0);
        const double variance = a / (a + 2.0) - psi * psi;
        return {psi, -0.5 * variance};
    }
    const double lambda = 0.5 * s;
    const double psi = betaprime_psi(p, lambda);
    const double second_moment =
        std::exp(log_lower_incomplete_gamma(a + 2.0, lambda) - 2.0 * std::log(lambda) -
                 log_lower_incomplete_gamma(a, lambda));
    const double variance = std::max(0.0, second_moment - psi * psi);
    return {psi, -0.5 * variance};
}

std::size_t default_table_points() { return 2500; }

double default_s_max(int p) {
    const double r = 500.0 + 6.0 * std::sqrt(static_cast<double>(p));
    return r * r;
}

namespace {

ShrinkageTable make_grid_table(int p, std::size_t n_grid, double s_max, std::string source) {
    if (n_grid < 2) {
        throw std::invalid_argument("build_table: need at least two grid points");
    }
    if (!(s_max > 0.0)) {
        throw std::invalid_argument("build_table: s_max must be positive");
    }
    ShrinkageTable table;
    table.p = p;
    table.source = std::move(source);
    table.grid.resize(n_grid);
    table.values.resize(n_grid);
    for (std::size_t i = 0; i < n_grid; ++i) {
        table.grid[i] = s_max * static_cast<double>(i) / static_cast<double>(n_grid - 1);
    }
    return table;
}

} // namespace

ShrinkageTable build_table(const MixingSample& sample, int p, std::size_t n_grid, double s_max) {
    check_mc_args(sample, p, 0.0);
    ShrinkageTable table = make_grid_table(p, n_grid, s_max, sample.spec.to_string());
    const PreparedDraws prep = prepare(sample);
    for (std::size_t i = 0; i < n_grid; ++i) {
        table.values[i] = std::clamp(moments_prepared(prep, p, table.grid[i]).a, 0.0, 1.0);
    }
    return table;
}

ShrinkageTable build_table_betaprime(int p, std::size_t n_grid, double s_max) {
    ShrinkageTable table = make_grid_table(p, n_grid, s_max, "closed-form betaprime");
    for (std::size_t i = 0; i < n_grid; ++i) {
        table.values[i] = shrink_betaprime_closed(p, table.grid[i]);
    }
    return table;
}

ShrinkageTable build_table(const MixingSample& sample, int p) {
    return build_table(sample, p, default_table_points(), default_s_max(p));
}

ShrinkageTable build_table_betaprime(int p) {
    return build_table_betaprime(p, default_table_points(), default_s_max(p));
}

double eval_table(const ShrinkageTable& table, double s) {
    if (table.grid.size() < 2 || table.grid.size() != table.values.size()) {
        throw std::invalid_argument("eval_table: malformed table");
    }
    if (!(s >= 0.0)) {
        throw std::invalid_argument("eval_table: s must be nonnegative");
    }
    if (s <= table.grid.front()) {
        return table.values.front();
    }
    if (s >= table.grid.back()) {
        return table.values.back();  // flat extrapolation
    }
    const auto it = std::upper_bound(table.grid.begin(), table.grid.end(), s);
    const std::size_t hi = static_cast<std::size_t>(it - table.grid.begin());
    const std::size_t lo = hi - 1;
    const double t = (s - table.grid[lo]) / (table.grid[hi] - table.grid[lo]);
    return table.values[lo] + t * (table.values[hi] - table.values[lo]);
}

void write_shrinkage_table_csv(const ShrinkageTable& table, std::ostream& out) {
    out << "# p=" << table.p << " source=" << table.source
        << " n_grid=" << table.grid.size() << " s_max=" << format_double(table.s_max()) << "\n";
    out << "s,a\n";
    for (std::size_t i = 0; i < table.grid.size(); ++i) {
        out << format_double(table.grid[i]) << "," << format_double(table.values[i]) << "\n";
    }
}

ShrinkageTable read_shrinkage_table_csv(std::istream& in) {
    std::string header;
    if (!std::getline(in, header) || header.rfind("# p=", 0) != 0) {
        throw std::runtime_error("read_shrinkage_table_csv: missing '# p=' header");
    }
    const std::size_t source_pos = header.find(" source=");
    const std::size_t ngrid_pos = header.rfind(" n_grid=");
    if (source_pos == std::string::npos || ngrid_pos == std::string::npos) {
        throw std::runtime_error("read_shrinkage_table_csv: malformed header");
    }
    ShrinkageTable table;
    table.p = static_cast<int>(parse_int(std::string_view(header).substr(4, source_pos - 4)));
    table.source = header.substr(source_pos + 8, ngrid_pos - source_pos - 8);

    std::string columns;
    if (!std::getline(in, columns) || columns != "s,a") {
        throw std::runtime_error("read_shrinkage_table_csv: expected 's,a' column line");
    }
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() != 2) {
            throw std::runtime_error("read_shrinkage_table_csv: bad row '" + line + "'");
        }
        table.grid.push_back(parse_double(fields[0]));
        table.values.push_back(parse_double(fields[1]));
    }
    if (table.grid.size() < 2) {
        throw std::runtime_error("read_shrinkage_table_csv: table has fewer than two rows");
    }
    return table;
}

void save_shrinkage_table(const ShrinkageTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("save_shrinkage_table: cannot open " + path);
    }
    write_shrinkage_table_csv(table, out);
}

ShrinkageTable load_shrinkage_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("load_shrinkage_table: cannot open " + path);
    }
    return read_shrinkage_table_csv(in);
}

} // namespace bnnlab
