#include "bnnlab/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "bnnlab/text.hpp"

namespace bnnlab {

void ExperimentConfig::validate() const {
    if (p < 1) throw std::invalid_argument("config: p must be positive");
    if (rules.empty()) throw std::invalid_argument("config: need at least one rule");
    if (r_max < 0.0 || r_step <= 0.0) throw std::invalid_argument("config: bad r grid");
    if (table_points < 2) throw std::invalid_argument("config: table needs >= 2 points");
    if (m_v < 1 || n_mc < 2 || k_dir < 1) throw std::invalid_argument("config: bad MC sizes");
    if (hs_n_mc < 2 || sparse_radial_n_mc < 2 || signal_points < 2) {
        throw std::invalid_argument("config: bad sparsity sweep sizes");
    }
    if (kl_outer < 2 || kl_inner < 2) throw std::invalid_argument("config: bad KL sizes");
    if (v_x <= 0.0 || v_y <= 0.0) throw std::invalid_argument("config: bad variances");
    fixed_spec();  // throws on inconsistent network shape
}

ExperimentConfig ExperimentConfig::quick_scaled() const {
    ExperimentConfig scaled = *this;
    scaled.m_v = std::max<long>(1000, m_v / 4);
    scaled.n_mc = std::min<long>(n_mc, 20000);
    scaled.k_dir = std::min(k_dir, 5);
    scaled.r_step = r_step * 5.0;
    scaled.hs_n_mc = std::max<long>(10, hs_n_mc / 5);
    scaled.sparse_radial_n_mc = std::max<long>(100, sparse_radial_n_mc / 5);
    scaled.kl_outer = std::max<long>(100, kl_outer / 4);
    return scaled;
}

MixingSpec ExperimentConfig::fixed_spec() const {
    return MixingSpec::fixed_bnn(depth, widths, scales, input_norm);
}

MixingSpec ExperimentConfig::dropout_spec() const {
    return MixingSpec::dropout_bnn(depth, widths, scales, keep_probs, input_norm);
}

namespace {

std::string quote(const std::string& s) { return "\"" + s + "\""; }

std::string int_array(const std::vector<int>& xs) {
    std::string out = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i > 0) out += ", ";
        out += std::to_string(xs[i]);
    }
    return out + "]";
}

std::string double_array(const std::vector<double>& xs) {
    std::string out = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i > 0) out += ", ";
        out += format_double(xs[i]);
    }
    return out + "]";
}

std::string string_array(const std::vector<std::string>& xs) {
    std::string out = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i > 0) out += ", ";
        out += quote(xs[i]);
    }
    return out + "]";
}

std::string strip(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> parse_array_items(const std::string& value, const std::string& key) {
    if (value.size() < 2 || value.front() != '[' || value.back() != ']') {
        throw std::invalid_argument("config: expected array for key '" + key + "'");
    }
    const std::string inner = strip(value.substr(1, value.size() - 2));
    std::vector<std::string> items;
    if (inner.empty()) return items;
    for (const auto& raw : split(inner, ',')) {
        items.push_back(strip(raw));
    }
    return items;
}

std::string unquote(const std::string& s, const std::string& key) {
    if (s.size() < 2 || s.front() != '"' || s.back() != '"') {
        throw std::invalid_argument("config: expected quoted string for key '" + key + "'");
    }
    return s.substr(1, s.size() - 2);
}

} // namespace

std::string ExperimentConfig::serialize() const {
    std::ostringstream out;
    out << "p = " << p << "\n";
    out << "rules = " << string_array(rules) << "\n";
    out << "depth = " << depth << "\n";
    out << "widths = " << int_array(widths) << "\n";
    out << "scales = " << double_array(scales) << "\n";
    out << "keep-probs = " << double_array(keep_probs) << "\n";
    out << "input-norm = " << format_double(input_norm) << "\n";
    out << "r-max = " << format_double(r_max) << "\n";
    out << "r-step = " << format_double(r_step) << "\n";
    out << "table-points = " << table_points << "\n";
    out << "m-v = " << m_v << "\n";
    out << "n-mc = " << n_mc << "\n";
    out << "k-dir = " << k_dir << "\n";
    out << "seed = " << seed << "\n";
    out << "hs-iterations = " << hs_iterations << "\n";
    out << "hs-burn-in = " << hs_burn_in << "\n";
    out << "hs-thin = " << hs_thin << "\n";
    out << "hs-n-mc = " << hs_n_mc << "\n";
    out << "sparse-radial-n-mc = " << sparse_radial_n_mc << "\n";
    out << "signal-points = " << signal_points << "\n";
    out << "v-x = " << format_double(v_x) << "\n";
    out << "v-y = " << format_double(v_y) << "\n";
    out << "kl-outer = " << kl_outer << "\n";
    out << "kl-inner = " << kl_inner << "\n";
    out << "out-dir = " << quote(out_dir) << "\n";
    out << "quick = " << (quick ? "true" : "false") << "\n";
    return out.str();
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
    ExperimentConfig config;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto comment = line.find('#');
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = strip(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config: expected 'key = value', got '" + line + "'");
        }
        const std::string key = strip(line.substr(0, eq));
        const std::string value = strip(line.substr(eq + 1));

        if (key == "p") config.p = int(parse_int(value));
        else if (key == "rules") {
            config.rules.clear();
            for (const auto& item : parse_array_items(value, key)) {
                config.rules.push_back(unquote(item, key));
            }
        } else if (key == "depth") config.depth = int(parse_int(value));
        else if (key == "widths") {
            config.widths.clear();
            for (const auto& item : parse_array_items(value, key)) {
                config.widths.push_back(int(parse_int(item)));
            }
        } else if (key == "scales") {
            config.scales.clear();
            for (const auto& item : parse_array_items(value, key)) {
                config.scales.push_back(parse_double(item));
            }
        } else if (key == "keep-probs") {
            config.keep_probs.clear();
            for (const auto& item : parse_array_items(value, key)) {
                config.keep_probs.push_back(parse_double(item));
            }
        } else if (key == "input-norm") config.input_norm = parse_double(value);
        else if (key == "r-max") config.r_max = parse_double(value);
        else if (key == "r-step") config.r_step = parse_double(value);
        else if (key == "table-points") config.table_points = parse_int(value);
        else if (key == "m-v") config.m_v = parse_int(value);
        else if (key == "n-mc") config.n_mc = parse_int(value);
        else if (key == "k-dir") config.k_dir = int(parse_int(value));
        else if (key == "seed") config.seed = parse_uint64(value);
        else if (key == "hs-iterations") config.hs_iterations = int(parse_int(value));
        else if (key == "hs-burn-in") config.hs_burn_in = int(parse_int(value));
        else if (key == "hs-thin") config.hs_thin = int(parse_int(value));
        else if (key == "hs-n-mc") config.hs_n_mc = parse_int(value);
        else if (key == "sparse-radial-n-mc") config.sparse_radial_n_mc = parse_int(value);
        else if (key == "signal-points") config.signal_points = int(parse_int(value));
        else if (key == "v-x") config.v_x = parse_double(value);
        else if (key == "v-y") config.v_y = parse_double(value);
        else if (key == "kl-outer") config.kl_outer = parse_int(value);
        else if (key == "kl-inner") config.kl_inner = parse_int(value);
        else if (key == "out-dir") config.out_dir = unquote(value, key);
        else if (key == "quick") {
            if (value == "true") config.quick = true;
            else if (value == "false") config.quick = false;
            else throw std::invalid_argument("config: bad boolean for 'quick'");
        } else {
            throw std::invalid_argument("config: unknown key '" + key + "'");
        }
    }
    return config;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("config: cannot open " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

} // namespace bnnlab
