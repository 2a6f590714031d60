#include "doctest.h"

#include <cmath>
#include <memory>
#include <stdexcept>

#include "bnnlab/estimators.hpp"
#include "bnnlab/mixing.hpp"
#include "oracles.hpp"

using namespace bnnlab;

namespace {

// Random orthogonal matrix by Gram-Schmidt on a Gaussian matrix.
std::vector<std::vector<double>> random_orthogonal(int p, RandomStream& rng) {
    std::vector<std::vector<double>> q(p, std::vector<double>(p));
    for (auto& row : q) {
        for (auto& x : row) x = rng.normal();
    }
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < i; ++j) {
            double dot = 0.0;
            for (int k = 0; k < p; ++k) dot += q[i][k] * q[j][k];
            for (int k = 0; k < p; ++k) q[i][k] -= dot * q[j][k];
        }
        double norm = 0.0;
        for (int k = 0; k < p; ++k) norm += q[i][k] * q[i][k];
        norm = std::sqrt(norm);
        for (int k = 0; k < p; ++k) q[i][k] /= norm;
    }
    return q;
}

std::vector<double> mat_vec(const std::vector<std::vector<double>>& m,
                            const std::vector<double>& v) {
    std::vector<double> out(v.size(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) {
        for (std::size_t j = 0; j < v.size(); ++j) {
            out[i] += m[i][j] * v[j];
        }
    }
    return out;
}

} // namespace

TEST_CASE("identity rule returns y unchanged") {
    const DecisionRule rule = DecisionRule::identity();
    const std::vector<double> y = {1.0, 2.0, 0.0, 0.0, 0.0};
    CHECK(bnnlab::apply(rule, y) == y);
    CHECK(rule.label == "mle");
}

TEST_CASE("closed-form radial rule scales by the frozen shrinkage factor") {
    const DecisionRule rule = DecisionRule::radial_closed(5);
    const std::vector<double> y = {1.0, 1.0, 0.0, 0.0, 0.0};  // ||y||^2 = 2
    const auto out = bnnlab::apply(rule, y);
    for (int i = 0; i < 2; ++i) {
        CHECK(out[i] == doctest::Approx(0.29061669278536242).epsilon(1e-12));
    }
    for (int i = 2; i < 5; ++i) {
        CHECK(out[i] == 0.0);
    }
}

TEST_CASE("radial rules map the origin to the origin") {
    const MixingSample sample = build_mixing_sample(MixingSpec::default_fixed_bnn(), 2000, 5);
    const auto table = std::make_shared<ShrinkageTable>(build_table(sample, 5, 100, 1000.0));
    for (const DecisionRule& rule :
         {DecisionRule::radial_closed(5), DecisionRule::radial_table(table, "bnn-fixed")}) {
        const std::vector<double> zero(5, 0.0);
        const auto out = bnnlab::apply(rule, zero);
        for (double v : out) {
            CHECK(v == 0.0);
        }
    }
}

TEST_CASE("James-Stein rule: untruncated shrinkage and origin convention") {
    const DecisionRule rule = DecisionRule::james_stein(5);
    const std::vector<double> y = {3.0, 0.0, 0.0, 0.0, 4.0};  // ||y||^2 = 25
    const auto out = bnnlab::apply(rule, y);
    CHECK(out[0] == doctest::Approx(3.0 * (1.0 - 3.0 / 25.0)).epsilon(1e-15));
    CHECK(out[4] == doctest::Approx(4.0 * (1.0 - 3.0 / 25.0)).epsilon(1e-15));

    // inside the ball ||y||^2 < p-2 the factor goes negative (no
    // positive-part truncation)
    const std::vector<double> small = {1.0, 0.0, 0.0, 0.0, 0.0};
    CHECK(bnnlab::apply(rule, small)[0] == doctest::Approx(1.0 - 3.0).epsilon(1e-15));

    const std::vector<double> zero(5, 0.0);
    for (double v : bnnlab::apply(rule, zero)) {
        CHECK(v == 0.0);
    }
    CHECK_THROWS_AS(DecisionRule::james_stein(2), std::invalid_argument);
}

TEST_CASE("dimension mismatch is rejected") {
    const DecisionRule rule = DecisionRule::radial_closed(5);
    CHECK_THROWS_AS(bnnlab::apply(rule, std::vector<double>(4, 1.0)), std::invalid_argument);
    const DecisionRule js = DecisionRule::james_stein(3);
    CHECK_THROWS_AS(bnnlab::apply(js, std::vector<double>(5, 1.0)), std::invalid_argument);
}

TEST_CASE("radial rules are equivariant under orthogonal rotation") {
    RandomStream rng(505);
    const MixingSample sample = build_mixing_sample(MixingSpec::beta_prime(5), 3000, 6);
    const auto table = std::make_shared<ShrinkageTable>(build_table(sample, 5, 200, 2000.0));
    for (const DecisionRule& rule :
         {DecisionRule::radial_closed(5), DecisionRule::radial_table(table, "t"),
          DecisionRule::james_stein(5)}) {
        for (int trial = 0; trial < 20; ++trial) {
            const auto q = random_orthogonal(5, rng);
            std::vector<double> y(5);
            for (auto& v : y) v = 3.0 * rng.normal();
            const auto lhs = bnnlab::apply(rule, mat_vec(q, y));
            const auto rhs = mat_vec(q, bnnlab::apply(rule, y));
            for (int i = 0; i < 5; ++i) {
                CHECK(lhs[i] == doctest::Approx(rhs[i]).epsilon(1e-11));
            }
        }
    }
}

TEST_CASE("rules with shrinkage factors in [0,1] contract toward the origin") {
    RandomStream rng(606);
    const MixingSample sample = build_mixing_sample(MixingSpec::default_dropout_bnn(), 3000, 7);
    const auto table = std::make_shared<ShrinkageTable>(build_table(sample, 5, 200, 2000.0));
    for (const DecisionRule& rule :
         {DecisionRule::identity(), DecisionRule::radial_closed(5),
          DecisionRule::radial_table(table, "bnn-dropout")}) {
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<double> y(5);
            for (auto& v : y) v = 10.0 * rng.normal();
            const auto out = bnnlab::apply(rule, y);
            CHECK(std::sqrt(squared_norm(out)) <= std::sqrt(squared_norm(y)) * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("deterministic rules are pure") {
    const DecisionRule rule = DecisionRule::radial_closed(5);
    const std::vector<double> y = {0.3, -1.2, 4.0, 0.0, 2.0};
    CHECK(bnnlab::apply(rule, y) == bnnlab::apply(rule, y));
}

TEST_CASE("horseshoe rule: same stream seed gives bit-identical output") {
    HorseshoeConfig config;
    config.iterations = 300;
    config.burn_in = 100;
    config.thin = 2;
    const DecisionRule rule = DecisionRule::horseshoe(config);
    CHECK(rule.is_stochastic());
    const std::vector<double> y = {4.0, 0.0, -1.0, 0.5, 0.0};
    RandomStream a(12345), b(12345);
    const auto ea = bnnlab::apply(rule, y, &a);
    const auto eb = bnnlab::apply(rule, y, &b);
    CHECK(ea == eb);
    CHECK_THROWS_AS(bnnlab::apply(rule, y, nullptr), std::invalid_argument);
}
