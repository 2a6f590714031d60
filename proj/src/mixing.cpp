#include "bnnlab/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string_view>

#include "bnnlab/text.hpp"

namespace bnnlab {

MixingSpec MixingSpec::fixed_bnn(int d, std::vector<int> widths, std::vector<double> scales,
                                 double input_norm) {
    MixingSpec spec;
    spec.kind = MixingKind::FixedBnn;
    spec.depth = d;
    spec.widths = std::move(widths);
    spec.layer_scales = std::move(scales);
    spec.input_norm = input_norm;
    spec.validate();
    return spec;
}

MixingSpec MixingSpec::dropout_bnn(int d, std::vector<int> widths, std::vector<double> scales,
                                   std::vector<double> keep_probs, double input_norm) {
    MixingSpec spec;
    spec.kind = MixingKind::DropoutBnn;
    spec.depth = d;
    spec.widths = std::move(widths);
    spec.layer_scales = std::move(scales);
    spec.keep_probs = std::move(keep_probs);
    spec.input_norm = input_norm;
    spec.validate();
    return spec;
}

MixingSpec MixingSpec::beta_prime(int p) {
    MixingSpec spec;
    spec.kind = MixingKind::BetaPrime;
    spec.dimension = p;
    spec.validate();
    return spec;
}

MixingSpec MixingSpec::point_mass(double v) {
    MixingSpec spec;
    spec.kind = MixingKind::PointMass;
    spec.point_value = v;
    spec.validate();
    return spec;
}

MixingSpec MixingSpec::default_fixed_bnn() {
    return fixed_bnn(3, {20, 20}, {1.0, 1.0, 1.0}, 1.0);
}

MixingSpec MixingSpec::default_dropout_bnn() {
    return dropout_bnn(3, {20, 20}, {1.0, 1.0, 1.0}, {0.8, 0.8}, 1.0);
}

void MixingSpec::validate() const {
    switch (kind) {
        case MixingKind::FixedBnn:
        case MixingKind::DropoutBnn: {
            if (depth < 1) {
                throw std::invalid_argument("MixingSpec: depth must be >= 1");
            }
            if (static_cast<int>(widths.size()) != depth - 1) {
                throw std::invalid_argument("MixingSpec: need depth-1 hidden widths");
            }
            for (int n : widths) {
                if (n < 1) throw std::invalid_argument("MixingSpec: widths must be positive");
            }
            if (static_cast<int>(layer_scales.size()) != depth) {
                throw std::invalid_argument("MixingSpec: need depth layer scales");
            }
            for (double s : layer_scales) {
                if (!(s > 0.0)) throw std::invalid_argument("MixingSpec: scales must be positive");
            }
            if (!(input_norm > 0.0)) {
                throw std::invalid_argument("MixingSpec: input norm must be positive");
            }
            if (kind == MixingKind::DropoutBnn) {
                if (keep_probs.size() != widths.size()) {
                    throw std::invalid_argument("MixingSpec: need depth-1 keep probabilities");
                }
                for (double q : keep_probs) {
                    if (!(q > 0.0) || q > 1.0) {
                        throw std::invalid_argument("MixingSpec: keep probabilities in (0,1]");
                    }
                }
            } else if (!keep_probs.empty()) {
                throw std::invalid_argument("MixingSpec: keep probabilities only for dropout");
            }
            break;
        }
        case MixingKind::BetaPrime:
            if (dimension < 5) {
                throw std::invalid_argument(
                    "MixingSpec: BetaPrime needs p >= 5 so that b = p/2 - 2 > 0");
            }
            break;
        case MixingKind::PointMass:
            if (!(point_value >= 0.0)) {
                throw std::invalid_argument("MixingSpec: point mass value must be nonnegative");
            }
            break;
    }
}

double MixingSpec::prefactor() const {
    double product = 1.0;
    for (double s : layer_scales) {
        product *= s * s;
    }
    return std::ldexp(input_norm * input_norm * product, depth - 1);
}

std::string MixingSpec::to_string() const {
    std::string out;
    auto join_ints = [](const std::vector<int>& xs) {
        std::string s;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (i > 0) s.push_back(',');
            s += std::to_string(xs[i]);
        }
        return s;
    };
    switch (kind) {
        case MixingKind::FixedBnn:
            out = "fixed-bnn d=" + std::to_string(depth);
            if (!widths.empty()) out += " widths=" + join_ints(widths);
            out += " scales=" + join_doubles(layer_scales, ',');
            out += " xnorm=" + format_double(input_norm);
            break;
        case MixingKind::DropoutBnn:
            out = "dropout-bnn d=" + std::to_string(depth);
            if (!widths.empty()) out += " widths=" + join_ints(widths);
            out += " scales=" + join_doubles(layer_scales, ',');
            if (!keep_probs.empty()) out += " keep=" + join_doubles(keep_probs, ',');
            out += " xnorm=" + format_double(input_norm);
            break;
        case MixingKind::BetaPrime:
            out = "betaprime p=" + std::to_string(dimension);
            break;
        case MixingKind::PointMass:
            out = "pointmass v=" + format_double(point_value);
            break;
    }
    return out;
}

MixingSpec MixingSpec::parse(std::string_view text) {
    const auto tokens = split(text, ' ');
    if (tokens.empty()) {
        throw std::invalid_argument("MixingSpec::parse: empty spec string");
    }
    auto value_of = [&](const std::string& key) -> std::string {
        const std::string prefix = key + "=";
        for (std::size_t i = 1; i < tokens.size(); ++i) {
            if (tokens[i].rfind(prefix, 0) == 0) {
                return tokens[i].substr(prefix.size());
            }
        }
        throw std::invalid_argument("MixingSpec::parse: missing key '" + key + "'");
    };
    auto has_key = [&](const std::string& key) {
        const std::string prefix = key + "=";
        for (std::size_t i = 1; i < tokens.size(); ++i) {
            if (tokens[i].rfind(prefix, 0) == 0) return true;
        }
        return false;
    };
    auto parse_ints = [](const std::string& s) {
        std::vector<int> out;
        for (const auto& tok : split(s, ',')) {
            out.push_back(static_cast<int>(parse_int(tok)));
        }
        return out;
    };
    auto parse_doubles = [](const std::string& s) {
        std::vector<double> out;
        for (const auto& tok : split(s, ',')) {
            out.push_back(parse_double(tok));
        }
        return out;
    };

    const std::string& head = tokens[0];
    if (head == "fixed-bnn") {
        const int d = static_cast<int>(parse_int(value_of("d")));
        std::vector<int> widths = has_key("widths") ? parse_ints(value_of("widths"))
                                                    : std::vector<int>{};
        return fixed_bnn(d, std::move(widths), parse_doubles(value_of("scales")),
                         parse_double(value_of("xnorm")));
    }
    if (head == "dropout-bnn") {
        const int d = static_cast<int>(parse_int(value_of("d")));
        std::vector<int> widths = has_key("widths") ? parse_ints(value_of("widths"))
                                                    : std::vector<int>{};
        std::vector<double> keep = has_key("keep") ? parse_doubles(value_of("keep"))
                                                   : std::vector<double>{};
        return dropout_bnn(d, std::move(widths), parse_doubles(value_of("scales")),
                           std::move(keep), parse_double(value_of("xnorm")));
    }
    if (head == "betaprime") {
        return beta_prime(static_cast<int>(parse_int(value_of("p"))));
    }
    if (head == "pointmass") {
        return point_mass(parse_double(value_of("v")));
    }
    throw std::invalid_argument("MixingSpec::parse: unknown kind '" + head + "'");
}

bool MixingSpec::operator==(const MixingSpec& other) const {
    return kind == other.kind && depth == other.depth && widths == other.widths &&
           layer_scales == other.layer_scales && input_norm == other.input_norm &&
           keep_probs == other.keep_probs && dimension == other.dimension &&
           point_value == other.point_value;
}

BinomialCoefficientIndex::BinomialCoefficientIndex(int n) : n_(n) {
    if (n < 1) {
        throw std::invalid_argument("BinomialCoefficientIndex: width must be >= 1");
    }
    // log C(n,k) for k = 1..n, normalized via max subtraction.
    std::vector<double> logw(static_cast<std::size_t>(n));
    const double lg_n1 = std::lgamma(static_cast<double>(n) + 1.0);
    double max_logw = -1e300;
    for (int k = 1; k <= n; ++k) {
        const double lw = lg_n1 - std::lgamma(static_cast<double>(k) + 1.0) -
                          std::lgamma(static_cast<double>(n - k) + 1.0);
        logw[static_cast<std::size_t>(k - 1)] = lw;
        max_logw = std::max(max_logw, lw);
    }
    std::vector<double> prob(logw.size());
    double total = 0.0;
    for (std::size_t i = 0; i < logw.size(); ++i) {
        prob[i] = std::exp(logw[i] - max_logw);
        total += prob[i];
    }
    for (double& p : prob) {
        p /= total;
    }

    // Walker alias construction.
    const std::size_t m = prob.size();
    accept_.assign(m, 0.0);
    alias_.assign(m, 0);
    std::vector<double> scaled(m);
    std::vector<std::size_t> small, large;
    for (std::size_t i = 0; i < m; ++i) {
        scaled[i] = prob[i] * static_cast<double>(m);
        (scaled[i] < 1.0 ? small : large).push_back(i);
    }
    while (!small.empty() && !large.empty()) {
        const std::size_t s = small.back();
        small.pop_back();
        const std::size_t l = large.back();
        large.pop_back();
        accept_[s] = scaled[s];
        alias_[s] = static_cast<int>(l);
        scaled[l] = (scaled[l] + scaled[s]) - 1.0;
        (scaled[l] < 1.0 ? small : large).push_back(l);
    }
    for (std::size_t i : large) accept_[i] = 1.0;
    for (std::size_t i : small) accept_[i] = 1.0;
}

int BinomialCoefficientIndex::draw(RandomStream& rng) const {
    const auto cell = static_cast<std::size_t>(rng.uniform_index(accept_.size()));
    const double u = rng.uniform();
    const int idx = (u < accept_[cell]) ? static_cast<int>(cell) : alias_[cell];
    return idx + 1;  // values are 1-based
}

MixingSampler::MixingSampler(MixingSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    if (spec_.kind == MixingKind::FixedBnn || spec_.kind == MixingKind::DropoutBnn) {
        prefactor_ = spec_.prefactor();
        for (int n : spec_.widths) {
            fixed_tables_.push_back(std::make_unique<BinomialCoefficientIndex>(n));
        }
        if (spec_.kind == MixingKind::DropoutBnn) {
            int max_width = 0;
            for (int n : spec_.widths) max_width = std::max(max_width, n);
            dropout_tables_.resize(static_cast<std::size_t>(max_width) + 1);
            for (double q : spec_.keep_probs) {
                keep_inverse_product_ /= q;
            }
        }
    } else if (spec_.kind == MixingKind::BetaPrime) {
        beta_shape_ = 0.5 * spec_.dimension - 2.0;
    }
}

const BinomialCoefficientIndex& MixingSampler::dropout_table(int width) const {
    auto& slot = dropout_tables_[static_cast<std::size_t>(width)];
    if (!slot) {
        slot = std::make_unique<BinomialCoefficientIndex>(width);
    }
    return *slot;
}

double MixingSampler::draw(RandomStream& rng) const {
    switch (spec_.kind) {
        case MixingKind::FixedBnn: {
            double v = prefactor_;
            for (const auto& table : fixed_tables_) {
                const int k = table->draw(rng);
                v *= rng.gamma(0.5 * k);
            }
            return v;
        }
        case MixingKind::DropoutBnn: {
            const std::size_t layers = spec_.widths.size();
            double gamma_product = 1.0;
            for (std::size_t l = 0; l < layers; ++l) {
                // Binomial(n, 1) is deterministically n; skipping the draw
                // keeps q=1 streams identical to the fixed-scale sampler.
                const double q = spec_.keep_probs[l];
                const int active = (q == 1.0) ? spec_.widths[l]
                                              : rng.binomial(spec_.widths[l], q);
                if (active == 0) {
                    return 0.0;
                }
                const int k = (q == 1.0) ? fixed_tables_[l]->draw(rng)
                                         : dropout_table(active).draw(rng);
                gamma_product *= rng.gamma(0.5 * k);
            }
            return prefactor_ * keep_inverse_product_ * gamma_product;
        }
        case MixingKind::BetaPrime:
            return betaprime_quantile(beta_shape_, rng.uniform());
        case MixingKind::PointMass:
            return spec_.point_value;
    }
    return 0.0;  // unreachable
}

double sample_fixed_bnn_variance(const MixingSpec& spec, RandomStream& rng) {
    if (spec.kind != MixingKind::FixedBnn) {
        throw std::invalid_argument("sample_fixed_bnn_variance: spec kind mismatch");
    }
    return MixingSampler(spec).draw(rng);
}

double sample_dropout_bnn_variance(const MixingSpec& spec, RandomStream& rng) {
    if (spec.kind != MixingKind::DropoutBnn) {
        throw std::invalid_argument("sample_dropout_bnn_variance: spec kind mismatch");
    }
    return MixingSampler(spec).draw(rng);
}

double sample_betaprime(const MixingSpec& spec, RandomStream& rng) {
    if (spec.kind != MixingKind::BetaPrime) {
        throw std::invalid_argument("sample_betaprime: spec kind mismatch");
    }
    return MixingSampler(spec).draw(rng);
}

double betaprime_quantile(double b, double u) {
    if (!(b > 0.0)) {
        throw std::domain_error("betaprime_quantile: shape must be positive");
    }
    if (u < 0.0 || u >= 1.0) {
        if (u == 1.0) return std::numeric_limits<double>::infinity();
        throw std::domain_error("betaprime_quantile: u must lie in [0,1)");
    }
    return std::pow(1.0 - u, -1.0 / b) - 1.0;
}

double dropout_inactive_probability(const MixingSpec& spec) {
    if (spec.kind != MixingKind::DropoutBnn) {
        throw std::invalid_argument("dropout_inactive_probability: spec kind mismatch");
    }
    // 1 - prod_l (1 - (1-q_l)^{n_l}), assembled through log1p/expm1 so the
    // tiny-atom regime (~1e-14) keeps full relative precision.
    double log_all_active = 0.0;
    for (std::size_t l = 0; l < spec.widths.size(); ++l) {
        const double log_layer_dead = spec.widths[l] * std::log1p(-spec.keep_probs[l]);
        log_all_active += std::log1p(-std::exp(log_layer_dead));
    }
    return -std::expm1(log_all_active);
}

MixingSample build_mixing_sample(const MixingSpec& spec, std::size_t m, std::uint64_t seed) {
    if (m < 1) {
        throw std::invalid_argument("build_mixing_sample: need at least one draw");
    }
    const MixingSampler sampler(spec);
    MixingSample sample;
    sample.spec = sampler.spec();
    sample.seed = seed;
    sample.draws.resize(m);

    // Fixed chunk schedule: draw i belongs to chunk i / kChunk and uses that
    // chunk's derived stream, so output is independent of worker count.
    constexpr std::size_t kChunk = 65536;
    const std::size_t n_chunks = (m + kChunk - 1) / kChunk;
    for (std::size_t c = 0; c < n_chunks; ++c) {
        RandomStream rng = RandomStream::derive(seed, 0x6d697869U /* "mixi" */, c);
        const std::size_t begin = c * kChunk;
        const std::size_t end = std::min(m, begin + kChunk);
        for (std::size_t i = begin; i < end; ++i) {
            sample.draws[i] = sampler.draw(rng);
        }
    }
    return sample;
}

void write_mixing_sample_csv(const MixingSample& sample, std::ostream& out) {
    out << "# spec=" << sample.spec.to_string() << " seed=" << sample.seed
        << " M=" << sample.draws.size() << "\n";
    for (double v : sample.draws) {
        out << format_double(v) << "\n";
    }
}

MixingSample read_mixing_sample_csv(std::istream& in) {
    std::string header;
    if (!std::getline(in, header) || header.rfind("# spec=", 0) != 0) {
        throw std::runtime_error("read_mixing_sample_csv: missing '# spec=' header");
    }
    const std::size_t seed_pos = header.rfind(" seed=");
    const std::size_t m_pos = header.rfind(" M=");
    if (seed_pos == std::string::npos || m_pos == std::string::npos || m_pos < seed_pos) {
        throw std::runtime_error("read_mixing_sample_csv: malformed header");
    }
    MixingSample sample;
    sample.spec = MixingSpec::parse(
        std::string_view(header).substr(7, seed_pos - 7));
    sample.seed = parse_uint64(std::string_view(header).substr(seed_pos + 6, m_pos - seed_pos - 6));
    const std::size_t m = static_cast<std::size_t>(
        parse_int(std::string_view(header).substr(m_pos + 3)));
    sample.draws.reserve(m);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        sample.draws.push_back(parse_double(line));
    }
    if (sample.draws.size() != m) {
        throw std::runtime_error("read_mixing_sample_csv: draw count does not match header M");
    }
    return sample;
}

void save_mixing_sample(const MixingSample& sample, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("save_mixing_sample: cannot open " + path);
    }
    write_mixing_sample_csv(sample, out);
}

MixingSample load_mixing_sample(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("load_mixing_sample: cannot open " + path);
    }
    return read_mixing_sample_csv(in);
}

} // namespace bnnlab
