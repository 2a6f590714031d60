#include "bnnlab/random.hpp"

#include <cmath>
#include <stdexcept>

namespace bnnlab {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

RandomStream RandomStream::derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                                  std::uint64_t c) {
    std::uint64_t s = seed;
    std::uint64_t z = splitmix64(s);
    s ^= a;
    z ^= splitmix64(s);
    s ^= b;
    z ^= splitmix64(s);
    s ^= c;
    z ^= splitmix64(s);
    return RandomStream(z);
}

double RandomStream::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    has_spare_ = true;
    return u * factor;
}

double RandomStream::gamma(double shape) {
    if (!(shape > 0.0)) {
        throw std::domain_error("RandomStream::gamma: shape must be positive");
    }
    if (shape < 1.0) {
        // Gamma(a) = Gamma(a+1) * U^{1/a}
        const double boost = std::pow(uniform(), 1.0 / shape);
        return gamma(shape + 1.0) * boost;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform();
        if (u < 1.0 - 0.0331 * (x * x) * (x * x)) {
            return d * v;
        }
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
            return d * v;
        }
    }
}

int RandomStream::binomial(int n, double q) {
    int count = 0;
    for (int i = 0; i < n; ++i) {
        if (uniform() < q) ++count;
    }
    return count;
}

void RandomStream::normal_vector(std::vector<double>& out) {
    for (double& x : out) {
        x = normal();
    }
}

} // namespace bnnlab
