#include "doctest.h"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "bnnlab/mixing.hpp"
#include "bnnlab/shrinkage.hpp"
#include "oracles.hpp"

using namespace bnnlab;

namespace {

MixingSample sample_from(std::vector<double> draws) {
    MixingSample sample;
    sample.draws = std::move(draws);
    sample.spec = MixingSpec::point_mass(1.0);
    return sample;
}

// Direct weighted sum in long double, no log-space tricks; valid while
// the raw weights stay in range.
long double brute_shrink(const std::vector<double>& draws, int p, double s) {
    long double num = 0.0L, den = 0.0L;
    for (double v : draws) {
        const long double w =
            std::pow(1.0L + (long double)v, -0.5L * p) * std::exp(-0.5L * s / (1.0L + v));
        num += w * (v / (1.0L + (long double)v));
        den += w;
    }
    return num / den;
}

} // namespace

TEST_CASE("single-atom sample shrinks by V/(1+V)") {
    const MixingSample sample = sample_from({1.0});
    for (int p : {1, 5, 50}) {
        for (double s : {0.0, 2.0, 1e4}) {
            CHECK(shrink_mc(sample, p, s) == 0.5);
            const auto [psi, psi_prime] = psi_and_derivative(sample, p, s);
            CHECK(psi == 0.5);
            CHECK(psi_prime == 0.0);
        }
    }
}

TEST_CASE("two-atom sample {0,3}: frozen hand values") {
    const MixingSample sample = sample_from({0.0, 3.0});
    // weights e^{-1} and 4^{-5/2} e^{-1/4}
    CHECK(shrink_mc(sample, 5, 2.0) == doctest::Approx(0.046538382967036345).epsilon(1e-12));
    const auto [psi, psi_prime] = psi_and_derivative(sample, 5, 2.0);
    CHECK(psi == doctest::Approx(0.9534616170329637).epsilon(1e-12));
    CHECK(psi_prime == doctest::Approx(-0.016368983068045360).epsilon(1e-12));
}

TEST_CASE("all-zero draws shrink to the origin") {
    const MixingSample sample = sample_from({0.0, 0.0, 0.0});
    CHECK(shrink_mc(sample, 5, 10.0) == 0.0);
}

TEST_CASE("complement identity psi + a == 1 holds exactly") {
    RandomStream rng(314);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> draws(20);
        for (auto& d : draws) d = 50.0 * rng.uniform();
        const MixingSample sample = sample_from(draws);
        const double s = 200.0 * rng.uniform();
        const ShrinkageMoments m = shrinkage_moments_mc(sample, 5, s);
        CHECK(m.psi + m.a == 1.0);
    }
}

TEST_CASE("log-weight path agrees with the direct long-double sum") {
    RandomStream rng(2718);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> draws(30);
        for (auto& d : draws) d = 40.0 * rng.uniform();
        const int p = (trial % 2 == 0) ? 5 : 50;
        const double s = 120.0 * rng.uniform();
        const MixingSample sample = sample_from(draws);
        const double got = shrink_mc(sample, p, s);
        const double want = static_cast<double>(brute_shrink(draws, p, s));
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("psi derivative bounds: 0 >= psi' >= -psi/2") {
    RandomStream rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> draws(25);
        for (auto& d : draws) d = std::exp(6.0 * rng.uniform() - 2.0);
        const MixingSample sample = sample_from(draws);
        const double s = std::exp(10.0 * rng.uniform() - 2.0);
        const auto [psi, psi_prime] = psi_and_derivative(sample, 5, s);
        CHECK(psi_prime <= 0.0);
        CHECK(psi_prime >= -0.5 * psi);
    }
}

TEST_CASE("closed form: frozen values and limits") {
    CHECK(shrink_betaprime_closed(5, 0.0) == doctest::Approx(0.25).epsilon(1e-12));
    // gamma(4,1) = 6 - 16/e, gamma(3,1) = 2 - 5/e
    CHECK(shrink_betaprime_closed(5, 2.0) ==
          doctest::Approx(0.29061669278536242).epsilon(1e-12));
    // gamma(.,inf) = Gamma(.): a(s) -> 1 - 2(p-2)/s
    CHECK(std::fabs(shrink_betaprime_closed(5, 1e6) - 0.999994) <= 1e-6);
    CHECK_THROWS_AS(shrink_betaprime_closed(4, 1.0), std::domain_error);
    CHECK_THROWS_AS(shrink_betaprime_closed(5, -1.0), std::domain_error);
}

TEST_CASE("closed form is continuous across the small-s series handoff") {
    for (int p : {5, 10, 100}) {
        const double left = shrink_betaprime_closed(p, 2.0 * 0.999e-6);
        const double right = shrink_betaprime_closed(p, 2.0 * 1.001e-6);
        CHECK(std::fabs(left - right) <= 1e-9);
        CHECK(std::fabs(shrink_betaprime_closed(p, 1e-9) - 1.0 / (p - 1.0)) <= 1e-9);
    }
}

TEST_CASE("closed form is nondecreasing over ten thousand grid points") {
    const int p = 5;
    const double s_max = default_s_max(p);
    double previous = shrink_betaprime_closed(p, 0.0);
    for (int i = 1; i < 10000; ++i) {
        const double s = s_max * i / 9999.0;
        const double value = shrink_betaprime_closed(p, s);
        CHECK(value - previous >= -1e-10);
        previous = value;
    }
}

TEST_CASE("closed-form psi derivative matches finite differences") {
    for (double s : {0.5, 2.0, 10.0, 100.0, 4000.0}) {
        const auto [psi, psi_prime] = psi_and_derivative_betaprime(5, s);
        const double h = 1e-4 * std::max(1.0, s);
        const double psi_hi = psi_and_derivative_betaprime(5, s + h).first;
        const double psi_lo = psi_and_derivative_betaprime(5, s - h).first;
        const double fd = (psi_hi - psi_lo) / (2.0 * h);
        CHECK(psi_prime == doctest::Approx(fd).epsilon(1e-5));
        CHECK(psi_prime <= 0.0);
        CHECK(psi_prime >= -0.5 * psi);
        CHECK(1.0 - psi == doctest::Approx(shrink_betaprime_closed(5, s)).epsilon(1e-12));
    }
}

TEST_CASE("build_table defaults and node values") {
    CHECK(default_table_points() == 2500);
    CHECK(default_s_max(5) == doctest::Approx(std::pow(500.0 + 6.0 * std::sqrt(5.0), 2)));

    const ShrinkageTable closed = build_table_betaprime(5, 100, 1000.0);
    CHECK(closed.values[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(closed.source == "closed-form betaprime");
    CHECK(closed.grid[0] == 0.0);
    CHECK(closed.s_max() == 1000.0);

    const MixingSample point = build_mixing_sample(MixingSpec::point_mass(1.0), 100, 1);
    const ShrinkageTable degenerate = build_table(point, 5, 50, 100.0);
    for (double v : degenerate.values) {
        CHECK(v == 0.5);
    }

    const MixingSample fixed = build_mixing_sample(MixingSpec::default_fixed_bnn(), 5000, 2);
    const ShrinkageTable table = build_table(fixed, 5, 200, default_s_max(5));
    for (double v : table.values) {
        CHECK(std::isfinite(v));
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("eval_table: nodes, midpoints, flat extrapolation") {
    ShrinkageTable table;
    table.p = 5;
    table.grid = {0.0, 1.0, 2.0, 3.0};
    table.values = {0.1, 0.3, 0.35, 0.9};
    table.source = "test";
    for (std::size_t i = 0; i < table.grid.size(); ++i) {
        CHECK(eval_table(table, table.grid[i]) == table.values[i]);
    }
    CHECK(eval_table(table, 0.5) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(eval_table(table, 2.5) == doctest::Approx(0.625).epsilon(1e-15));
    CHECK(eval_table(table, 6.0) == 0.9);
    // between nodes the value stays within the bracketing node values
    for (double s = 0.0; s <= 3.0; s += 0.01) {
        const double v = eval_table(table, s);
        CHECK(v >= 0.1);
        CHECK(v <= 0.9);
    }
}

TEST_CASE("shrink_mc against the closed form for a BetaPrime sample (smoke grid)") {
    // Full-resolution version is the fourth acceptance criterion; this
    // checks a thinned grid at the same M.
    const MixingSample sample = build_mixing_sample(MixingSpec::beta_prime(5), 200000, 404);
    for (double s : {0.0, 10.0, 100.0, 1000.0, 50000.0, 260000.0}) {
        const double mc = shrink_mc(sample, 5, s);
        const double closed = shrink_betaprime_closed(5, s);
        CHECK(std::fabs(mc - closed) <= 0.01);
    }
}

TEST_CASE("shrinkage table CSV round-trips") {
    const ShrinkageTable table = build_table_betaprime(7, 64, 2500.0);
    std::stringstream buffer;
    write_shrinkage_table_csv(table, buffer);
    const ShrinkageTable loaded = read_shrinkage_table_csv(buffer);
    CHECK(loaded.p == table.p);
    CHECK(loaded.source == table.source);
    REQUIRE(loaded.grid.size() == table.grid.size());
    for (std::size_t i = 0; i < table.grid.size(); ++i) {
        REQUIRE(loaded.grid[i] == table.grid[i]);
        REQUIRE(loaded.values[i] == table.values[i]);
    }
}

TEST_CASE("argument validation") {
    const MixingSample empty;
    CHECK_THROWS_AS(shrink_mc(empty, 5, 1.0), std::invalid_argument);
    const MixingSample one = sample_from({1.0});
    CHECK_THROWS_AS(shrink_mc(one, 0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(shrink_mc(one, 5, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(build_table(one, 5, 1, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(build_table(one, 5, 100, 0.0), std::invalid_argument);
}
