#ifndef BNNLAB_RANDOM_HPP
#define BNNLAB_RANDOM_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace bnnlab {

/// Deterministic random stream. All samplers in the library draw from an
/// explicit stream, never from global state, so any (seed, task-index)
/// pair reproduces bit-identically across runs and worker counts.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : gen_(seed) {}

    /// Independent stream for a sub-task. Mixing is splitmix64-based, so
    /// streams for distinct (a, b, c) are decorrelated from each other
    /// and from the parent seed.
    static RandomStream derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                               std::uint64_t c = 0);

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform() {
        return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1p-53;
    }

    /// Uniform integer in [0, n). n must be >= 1.
    std::uint64_t uniform_index(std::uint64_t n) {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(gen_()) * n) >> 64);
    }

    /// Standard normal via the Marsaglia polar method (spare cached).
    double normal();

    /// Gamma(shape, rate 1) via Marsaglia-Tsang, with the usual
    /// U^{1/shape} boost for shape < 1. Throws for shape <= 0.
    double gamma(double shape);

    double exponential() { return -std::log(uniform()); }

    /// Binomial(n, q) by direct Bernoulli counting (n stays small here).
    int binomial(int n, double q);

    /// Fills out with i.i.d. standard normals.
    void normal_vector(std::vector<double>& out);

private:
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// splitmix64 step; used for seed derivation.
std::uint64_t splitmix64(std::uint64_t& state);

} // namespace bnnlab

#endif
