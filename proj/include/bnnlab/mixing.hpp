#ifndef BNNLAB_MIXING_HPP
#define BNNLAB_MIXING_HPP

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "bnnlab/random.hpp"

namespace bnnlab {

enum class MixingKind { FixedBnn, DropoutBnn, BetaPrime, PointMass };

/// Declarative description of the mixing distribution of the effective
/// output variance V (or W for the hyperprior case).
struct MixingSpec {
    MixingKind kind = MixingKind::FixedBnn;

    // FixedBnn / DropoutBnn
    int depth = 1;                      // d >= 1
    std::vector<int> widths;            // n_1..n_{d-1}
    std::vector<double> layer_scales;   // sigma_1..sigma_d
    double input_norm = 1.0;            // ||x||
    std::vector<double> keep_probs;     // q_1..q_{d-1}, DropoutBnn only

    // BetaPrime
    int dimension = 5;                  // p >= 5, shape b = p/2 - 2

    // PointMass (v = 0 allowed as the pure-Gaussian probe case)
    double point_value = 1.0;

    static MixingSpec fixed_bnn(int d, std::vector<int> widths, std::vector<double> scales,
                                double input_norm = 1.0);
    static MixingSpec dropout_bnn(int d, std::vector<int> widths, std::vector<double> scales,
                                  std::vector<double> keep_probs, double input_norm = 1.0);
    static MixingSpec beta_prime(int p);
    static MixingSpec point_mass(double v);

    /// Reference fixed-scale network: d=3, n=(20,20), sigma=1, ||x||=1.
    static MixingSpec default_fixed_bnn();
    /// Reference dropout network: the fixed-scale defaults with q=(0.8,0.8).
    static MixingSpec default_dropout_bnn();

    /// Throws std::invalid_argument if any field invariant is violated.
    void validate() const;

    /// 2^{d-1} ||x||^2 prod sigma_l^2 (the deterministic prefactor of V).
    double prefactor() const;

    /// Canonical one-line form; round-trips through parse().
    std::string to_string() const;
    static MixingSpec parse(std::string_view text);

    bool operator==(const MixingSpec& other) const;
};

/// Stored empirical mixing measure: M i.i.d. draws of V.
struct MixingSample {
    std::vector<double> draws;
    MixingSpec spec;
    std::uint64_t seed = 0;

    std::size_t size() const { return draws.size(); }
};

/// Draws k in {1..n} with probability proportional to C(n, k).
/// Weights are assembled in log space; sampling is O(1) via an alias table.
class BinomialCoefficientIndex {
public:
    explicit BinomialCoefficientIndex(int n);
    int draw(RandomStream& rng) const;
    int width() const { return n_; }

private:
    int n_;
    std::vector<double> accept_;
    std::vector<int> alias_;
};

/// Reusable sampler for a MixingSpec; alias tables are built once per
/// width and cached across draws.
class MixingSampler {
public:
    explicit MixingSampler(MixingSpec spec);
    double draw(RandomStream& rng) const;
    const MixingSpec& spec() const { return spec_; }

private:
    MixingSpec spec_;
    std::vector<std::unique_ptr<BinomialCoefficientIndex>> fixed_tables_;  // one per hidden layer
    // Dropout: realized widths vary per draw; tables cached per width value.
    mutable std::vector<std::unique_ptr<BinomialCoefficientIndex>> dropout_tables_;
    double prefactor_ = 1.0;
    double keep_inverse_product_ = 1.0;
    double beta_shape_ = 0.0;

    const BinomialCoefficientIndex& dropout_table(int width) const;
};

/// One draw of the fixed-scale effective output variance
/// V = 2^{d-1} ||x||^2 (prod sigma^2) (prod T_l), T_l ~ Gamma(k_l/2, 1).
double sample_fixed_bnn_variance(const MixingSpec& spec, RandomStream& rng);

/// One draw under inverted dropout; returns 0 when any layer deactivates.
double sample_dropout_bnn_variance(const MixingSpec& spec, RandomStream& rng);

/// One draw of W ~ BetaPrime(1, b), b = p/2 - 2, by inverse CDF.
double sample_betaprime(const MixingSpec& spec, RandomStream& rng);

/// Inverse CDF of BetaPrime(1, b): w = (1-u)^{-1/b} - 1.
double betaprime_quantile(double b, double u);

/// Exact probability that a dropout draw returns V = 0:
/// 1 - prod_l (1 - (1-q_l)^{n_l}).
double dropout_inactive_probability(const MixingSpec& spec);

/// M i.i.d. draws, deterministic in (spec, M, seed). Generation is split
/// into fixed-size chunks with per-chunk derived streams, so the result
/// does not depend on how chunks are scheduled across workers.
MixingSample build_mixing_sample(const MixingSpec& spec, std::size_t m, std::uint64_t seed);

/// CSV persistence. Header line: `# spec=<canonical> seed=<u64> M=<int>`,
/// then one draw per line, shortest round-trip decimal.
void write_mixing_sample_csv(const MixingSample& sample, std::ostream& out);
MixingSample read_mixing_sample_csv(std::istream& in);
void save_mixing_sample(const MixingSample& sample, const std::string& path);
MixingSample load_mixing_sample(const std::string& path);

} // namespace bnnlab

#endif
