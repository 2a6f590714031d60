#include "doctest.h"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "bnnlab/mixing.hpp"
#include "oracles.hpp"

using namespace bnnlab;

TEST_CASE("fixed-scale depth 1 is deterministic: V = 2^0 ||x||^2 sigma^2") {
    const MixingSpec spec = MixingSpec::fixed_bnn(1, {}, {2.0}, 3.0);
    RandomStream rng(1);
    for (int i = 0; i < 10; ++i) {
        CHECK(sample_fixed_bnn_variance(spec, rng) == 36.0);
    }
}

TEST_CASE("binomial-coefficient index matches C(n,k) frequencies") {
    const int n = 6;
    BinomialCoefficientIndex index(n);
    RandomStream rng(77);
    const long draws = 1000000;
    std::vector<long> counts(n + 1, 0);
    for (long i = 0; i < draws; ++i) {
        ++counts[index.draw(rng)];
    }
    const auto row = oracles::pascal_row(n);
    const double total = std::pow(2.0, n) - 1.0;
    CHECK(counts[0] == 0);
    for (int k = 1; k <= n; ++k) {
        const double want = row[k] / total;
        const double got = counts[k] / double(draws);
        const double se = std::sqrt(want * (1.0 - want) / draws);
        CHECK(std::fabs(got - want) <= 4.0 * se);
    }
}

TEST_CASE("fixed-scale default network mean matches the brute-force k-sum") {
    // E[V] = 4 (E[T])^2 with E[T] = sum_k C(20,k) (k/2) / (2^20 - 1)
    const auto row = oracles::pascal_row(20);
    double e_k = 0.0;
    const double total = std::pow(2.0, 20) - 1.0;
    for (int k = 1; k <= 20; ++k) {
        e_k += row[k] * k / total;
    }
    const double expected = 4.0 * (e_k / 2.0) * (e_k / 2.0);
    CHECK(expected == doctest::Approx(100.000190735).epsilon(1e-9));

    const MixingSample sample = build_mixing_sample(MixingSpec::default_fixed_bnn(), 1000000, 3);
    const auto mv = oracles::mean_var(sample.draws);
    CHECK(std::fabs(mv.mean - expected) <= 4.0 * mv.stderr_of_mean);
}

TEST_CASE("depth 2 with width 1: V = 2 T, T ~ Gamma(1/2)") {
    const MixingSpec spec = MixingSpec::fixed_bnn(2, {1}, {1.0, 1.0}, 1.0);
    const MixingSample sample = build_mixing_sample(spec, 1000000, 11);
    const auto mv = oracles::mean_var(sample.draws);
    CHECK(std::fabs(mv.mean - 1.0) <= 4.0 * mv.stderr_of_mean);
}

TEST_CASE("dropout with keep probability 1 reproduces the fixed-scale draws") {
    const MixingSpec fixed = MixingSpec::default_fixed_bnn();
    const MixingSpec dropout =
        MixingSpec::dropout_bnn(3, {20, 20}, {1.0, 1.0, 1.0}, {1.0, 1.0}, 1.0);
    const MixingSample a = build_mixing_sample(fixed, 20000, 5);
    const MixingSample b = build_mixing_sample(dropout, 20000, 5);
    for (std::size_t i = 0; i < a.draws.size(); ++i) {
        REQUIRE(a.draws[i] == b.draws[i]);
    }
}

TEST_CASE("dropout inactive probability: exact atom arithmetic") {
    // n = (20,20), q = (0.8,0.8): 1 - (1 - 0.2^20)^2
    const MixingSpec spec = MixingSpec::default_dropout_bnn();
    CHECK(dropout_inactive_probability(spec) ==
          doctest::Approx(2.097151999999989e-14).epsilon(1e-11));

    // Observable at width 1: P(V=0) = 1 - q^2 = 0.36
    const MixingSpec tiny =
        MixingSpec::dropout_bnn(3, {1, 1}, {1.0, 1.0, 1.0}, {0.8, 0.8}, 1.0);
    CHECK(dropout_inactive_probability(tiny) == doctest::Approx(0.36).epsilon(1e-12));
    const MixingSample sample = build_mixing_sample(tiny, 200000, 19);
    long zeros = 0;
    double nonzero_sum = 0.0;
    for (double v : sample.draws) {
        if (v == 0.0) {
            ++zeros;
        } else {
            nonzero_sum += v;
        }
    }
    const double zero_frac = zeros / double(sample.size());
    CHECK(std::fabs(zero_frac - 0.36) <= 4.0 * std::sqrt(0.36 * 0.64 / double(sample.size())));
    // Conditional on activity both layers keep one unit, so
    // V = 6.25 T1 T2 with T ~ Gamma(1/2): mean 6.25 * 0.25.
    const double nonzero_mean = nonzero_sum / double(sample.size() - zeros);
    CHECK(nonzero_mean == doctest::Approx(6.25 * 0.25).epsilon(0.05));
}

TEST_CASE("dropout keep->1 converges to the fixed-scale law (KS)") {
    const MixingSpec fixed = MixingSpec::default_fixed_bnn();
    const MixingSpec nearly =
        MixingSpec::dropout_bnn(3, {20, 20}, {1.0, 1.0, 1.0}, {0.999999, 0.999999}, 1.0);
    const std::size_t m = 100000;
    const MixingSample a = build_mixing_sample(fixed, m, 101);
    const MixingSample b = build_mixing_sample(nearly, m, 202);
    const double ks = oracles::ks_statistic(a.draws, b.draws);
    const double critical_1pct = 1.628 * std::sqrt(2.0 / double(m));
    CHECK(ks < critical_1pct);
}

TEST_CASE("betaprime quantile and sampling") {
    CHECK(betaprime_quantile(0.5, 0.0) == 0.0);
    CHECK(betaprime_quantile(1.0, 0.5) == doctest::Approx(1.0).epsilon(1e-12));

    // p = 6 gives b = 1, median 2^{1/1} - 1 = 1.
    const MixingSample sample = build_mixing_sample(MixingSpec::beta_prime(6), 1000000, 31);
    std::vector<double> sorted = sample.draws;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[sorted.size() / 2];
    // sd of the sample median ~ 1/(2 f(1) sqrt(n)), f(1) = 1/4
    CHECK(std::fabs(median - 1.0) <= 3.0 * 2.0 / std::sqrt(1e6));

    // p = 10 gives b = 3: empirical CDF vs 1 - (1+w)^{-3}
    const MixingSample s3 = build_mixing_sample(MixingSpec::beta_prime(10), 1000000, 47);
    std::vector<double> sorted3 = s3.draws;
    std::sort(sorted3.begin(), sorted3.end());
    for (double w : {0.5, 1.0, 2.0, 5.0}) {
        const double want = 1.0 - std::pow(1.0 + w, -3.0);
        const auto it = std::upper_bound(sorted3.begin(), sorted3.end(), w);
        const double got = double(it - sorted3.begin()) / double(sorted3.size());
        CHECK(std::fabs(got - want) <= 3.0 * std::sqrt(want * (1.0 - want) / 1e6));
    }
}

TEST_CASE("build_mixing_sample is bit-identical across runs") {
    const MixingSpec spec = MixingSpec::default_fixed_bnn();
    const MixingSample a = build_mixing_sample(spec, 200000, 7);
    const MixingSample b = build_mixing_sample(spec, 200000, 7);
    REQUIRE(a.draws.size() == b.draws.size());
    for (std::size_t i = 0; i < a.draws.size(); ++i) {
        REQUIRE(a.draws[i] == b.draws[i]);
    }
    // different seed must differ
    const MixingSample c = build_mixing_sample(spec, 1000, 8);
    const MixingSample d = build_mixing_sample(spec, 1000, 7);
    CHECK(c.draws[0] != d.draws[0]);
}

TEST_CASE("point mass sample is degenerate") {
    const MixingSample sample = build_mixing_sample(MixingSpec::point_mass(1.0), 5, 0);
    REQUIRE(sample.draws.size() == 5);
    for (double v : sample.draws) {
        CHECK(v == 1.0);
    }
}

TEST_CASE("betaprime tail fraction matches the closed-form CDF") {
    // p = 5: b = 0.5, P(W > 9) = 10^{-1/2}
    const MixingSample sample = build_mixing_sample(MixingSpec::beta_prime(5), 200000, 13);
    long count = 0;
    for (double v : sample.draws) {
        if (v > 9.0) ++count;
    }
    const double want = std::pow(10.0, -0.5);
    const double got = count / double(sample.size());
    CHECK(std::fabs(got - want) <= 3.0 * std::sqrt(want * (1.0 - want) / double(sample.size())));
}

TEST_CASE("log V decomposes into the constant plus digamma means") {
    // E[log V] = log(2^{d-1} ||x||^2 prod sigma^2) + sum_l E[digamma(k_l/2)]
    const MixingSpec spec = MixingSpec::default_fixed_bnn();
    const auto row = oracles::pascal_row(20);
    const double total = std::pow(2.0, 20) - 1.0;
    double digamma_mean = 0.0;
    for (int k = 1; k <= 20; ++k) {
        digamma_mean += row[k] / total * oracles::digamma(0.5 * k);
    }
    const double expected = std::log(4.0) + 2.0 * digamma_mean;

    const MixingSample sample = build_mixing_sample(spec, 1000000, 23);
    std::vector<double> logs(sample.draws.size());
    for (std::size_t i = 0; i < logs.size(); ++i) {
        logs[i] = std::log(sample.draws[i]);
    }
    const auto mv = oracles::mean_var(logs);
    CHECK(std::fabs(mv.mean - expected) <= 4.0 * mv.stderr_of_mean);
}

TEST_CASE("draw positivity: zeros only from dropout") {
    for (const MixingSpec& spec :
         {MixingSpec::default_fixed_bnn(), MixingSpec::beta_prime(5), MixingSpec::point_mass(2.5)}) {
        const MixingSample sample = build_mixing_sample(spec, 20000, 3);
        for (double v : sample.draws) {
            REQUIRE(v > 0.0);
        }
    }
    const MixingSpec leaky = MixingSpec::dropout_bnn(2, {1}, {1.0, 1.0}, {0.5}, 1.0);
    const MixingSample sample = build_mixing_sample(leaky, 1000, 3);
    bool has_zero = false;
    for (double v : sample.draws) {
        REQUIRE(v >= 0.0);
        has_zero = has_zero || v == 0.0;
    }
    CHECK(has_zero);
}

TEST_CASE("spec validation rejects bad parameters") {
    CHECK_THROWS_AS(MixingSpec::beta_prime(4), std::invalid_argument);
    CHECK_THROWS_AS(MixingSpec::fixed_bnn(0, {}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(MixingSpec::fixed_bnn(2, {0}, {1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(MixingSpec::fixed_bnn(2, {5}, {1.0, -1.0}), std::invalid_argument);
    CHECK_THROWS_AS(MixingSpec::fixed_bnn(2, {5}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(MixingSpec::dropout_bnn(2, {5}, {1.0, 1.0}, {0.0}), std::invalid_argument);
    CHECK_THROWS_AS(MixingSpec::dropout_bnn(2, {5}, {1.0, 1.0}, {1.5}), std::invalid_argument);
    CHECK_THROWS_AS(MixingSpec::point_mass(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(build_mixing_sample(MixingSpec::point_mass(1.0), 0, 1),
                    std::invalid_argument);
    RandomStream rng(0);
    CHECK_THROWS_AS(sample_fixed_bnn_variance(MixingSpec::beta_prime(5), rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(sample_betaprime(MixingSpec::point_mass(1.0), rng), std::invalid_argument);
}

TEST_CASE("spec canonical string round-trips") {
    for (const MixingSpec& spec :
         {MixingSpec::default_fixed_bnn(), MixingSpec::default_dropout_bnn(),
          MixingSpec::beta_prime(50), MixingSpec::point_mass(0.125),
          MixingSpec::fixed_bnn(1, {}, {0.7}, 2.5)}) {
        CHECK(MixingSpec::parse(spec.to_string()) == spec);
    }
}

TEST_CASE("mixing sample CSV round-trips bit-exactly") {
    const MixingSample sample = build_mixing_sample(MixingSpec::default_dropout_bnn(), 500, 91);
    std::stringstream buffer;
    write_mixing_sample_csv(sample, buffer);
    const MixingSample loaded = read_mixing_sample_csv(buffer);
    CHECK(loaded.spec == sample.spec);
    CHECK(loaded.seed == sample.seed);
    REQUIRE(loaded.draws.size() == sample.draws.size());
    for (std::size_t i = 0; i < sample.draws.size(); ++i) {
        REQUIRE(loaded.draws[i] == sample.draws[i]);
    }
}
