// bnnlab: shrinkage rules induced by deep ReLU BNN priors in the normal
// location model. Subcommands build shrinkage tables, estimate risk
// curves, run the horseshoe sparsity sweep, estimate predictive KL risk,
// run the minimaxity diagnostics, and render CSV results to SVG.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bnnlab/config.hpp"
#include "bnnlab/diagnostics.hpp"
#include "bnnlab/estimators.hpp"
#include "bnnlab/mixing.hpp"
#include "bnnlab/predictive.hpp"
#include "bnnlab/risk.hpp"
#include "bnnlab/shrinkage.hpp"
#include "bnnlab/svg.hpp"
#include "bnnlab/text.hpp"

namespace fs = std::filesystem;
using namespace bnnlab;

namespace {

constexpr const char* kVersion = "bnnlab 0.1.0";

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t hash = 1469598103934665603ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    return hash;
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    std::uint64_t s = seed;
    std::uint64_t z = splitmix64(s);
    s ^= a;
    z ^= splitmix64(s);
    s ^= b;
    z ^= splitmix64(s);
    return z;
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    out << text;
}

struct RunContext {
    ExperimentConfig requested;  // as given on the command line / file
    ExperimentConfig effective;  // after --quick scaling
    fs::path out_dir;
    std::vector<std::string> cache_notes;
    std::vector<std::string> outputs;

    void note_output(const fs::path& p) { outputs.push_back(p.filename().string()); }

    void write_manifest(const std::string& subcommand) const {
        std::ostringstream manifest;
        manifest << "subcommand = \"" << subcommand << "\"\n";
        manifest << "version = \"" << kVersion << "\"\n";
        manifest << "quick = " << (requested.quick ? "true" : "false") << "\n";
        if (requested.quick) {
            manifest << "# quick scaling: m-v /4, n-mc -> <=20000, k-dir -> <=5, r-step x5,\n";
            manifest << "# hs-n-mc /5, sparse-radial-n-mc /5, kl-outer /4\n";
        }
        for (const auto& note : cache_notes) {
            manifest << "# cache: " << note << "\n";
        }
        for (const auto& file : outputs) {
            manifest << "# output: " << file << "\n";
        }
        manifest << "\n# effective configuration\n";
        manifest << effective.serialize();
        write_text_file(out_dir / (subcommand + "-manifest.toml"), manifest.str());
    }
};

/// Builds (or loads from the content-addressed cache) the MC shrinkage
/// table for a mixing spec.
std::shared_ptr<const ShrinkageTable> cached_table(RunContext& ctx, const MixingSpec& spec) {
    const ExperimentConfig& cfg = ctx.effective;
    const double s_max = default_s_max(cfg.p);
    const std::string key = spec.to_string() + "|p=" + std::to_string(cfg.p) +
                            "|n_grid=" + std::to_string(cfg.table_points) +
                            "|s_max=" + format_double(s_max) + "|M=" + std::to_string(cfg.m_v) +
                            "|seed=" + std::to_string(cfg.seed);
    const fs::path cache_dir = ctx.out_dir / "cache";
    fs::create_directories(cache_dir);
    const fs::path path = cache_dir / ("table_" + hex64(fnv1a(key)) + ".csv");
    if (fs::exists(path)) {
        ctx.cache_notes.push_back("hit " + path.filename().string() + " <- " + key);
        return std::make_shared<ShrinkageTable>(load_shrinkage_table(path.string()));
    }
    const MixingSample sample = build_mixing_sample(spec, std::size_t(cfg.m_v), cfg.seed);
    ShrinkageTable table = build_table(sample, cfg.p, std::size_t(cfg.table_points), s_max);
    save_shrinkage_table(table, path.string());
    ctx.cache_notes.push_back("miss " + path.filename().string() + " <- " + key);
    return std::make_shared<ShrinkageTable>(std::move(table));
}

DecisionRule make_rule(RunContext& ctx, const std::string& name) {
    const ExperimentConfig& cfg = ctx.effective;
    if (name == "mle") return DecisionRule::identity("mle");
    if (name == "js") return DecisionRule::james_stein(cfg.p, "js");
    if (name == "bnn-hyper") return DecisionRule::radial_closed(cfg.p, "bnn-hyper");
    if (name == "bnn-fixed") {
        return DecisionRule::radial_table(cached_table(ctx, cfg.fixed_spec()), "bnn-fixed");
    }
    if (name == "bnn-dropout") {
        return DecisionRule::radial_table(cached_table(ctx, cfg.dropout_spec()), "bnn-dropout");
    }
    if (name == "horseshoe") {
        HorseshoeConfig hs;
        hs.iterations = cfg.hs_iterations;
        hs.burn_in = cfg.hs_burn_in;
        hs.thin = cfg.hs_thin;
        hs.seed = cfg.seed;
        return DecisionRule::horseshoe(hs, "horseshoe");
    }
    throw std::invalid_argument("unknown rule '" + name + "' (expected mle, js, bnn-fixed, "
                                "bnn-dropout, bnn-hyper, or horseshoe)");
}

std::vector<double> radial_grid(const ExperimentConfig& cfg) {
    std::vector<double> grid;
    for (double r = 0.0; r <= cfg.r_max + 1e-9; r += cfg.r_step) {
        grid.push_back(r);
    }
    return grid;
}

std::vector<double> signal_grid(const ExperimentConfig& cfg) {
    std::vector<double> grid;
    const double top = 2.5 * std::sqrt(double(cfg.p));
    for (int i = 0; i < cfg.signal_points; ++i) {
        grid.push_back(top * i / (cfg.signal_points - 1));
    }
    return grid;
}

int run_shrinkage_table(RunContext& ctx) {
    const ExperimentConfig& cfg = ctx.effective;
    for (const std::string& name : cfg.rules) {
        if (name == "bnn-fixed" || name == "bnn-dropout") {
            const MixingSpec spec =
                (name == "bnn-fixed") ? cfg.fixed_spec() : cfg.dropout_spec();
            const auto table = cached_table(ctx, spec);
            const fs::path path = ctx.out_dir / ("table_" + name + ".csv");
            save_shrinkage_table(*table, path.string());
            ctx.note_output(path);
        } else if (name == "bnn-hyper") {
            const ShrinkageTable table =
                build_table_betaprime(cfg.p, std::size_t(cfg.table_points), default_s_max(cfg.p));
            const fs::path path = ctx.out_dir / "table_bnn-hyper.csv";
            save_shrinkage_table(table, path.string());
            ctx.note_output(path);
        }
    }
    ctx.write_manifest("shrinkage-table");
    return 0;
}

int run_risk_curve(RunContext& ctx) {
    const ExperimentConfig& cfg = ctx.effective;
    const std::vector<double> grid = radial_grid(cfg);
    std::vector<RiskCurve> curves;
    for (const std::string& name : cfg.rules) {
        const DecisionRule rule = make_rule(ctx, name);
        const long n_mc = (name == "horseshoe") ? cfg.hs_n_mc : cfg.n_mc;
        curves.push_back(risk_curve(rule, cfg.p, grid, cfg.k_dir, n_mc, cfg.seed));
        std::cerr << "risk-curve: " << name << " done\n";
    }
    const fs::path path = ctx.out_dir / "risk_curves.csv";
    save_risk_curves(curves, path.string());
    ctx.note_output(path);
    ctx.write_manifest("risk-curve");
    return 0;
}

int run_horseshoe_risk(RunContext& ctx) {
    const ExperimentConfig& cfg = ctx.effective;
    const std::vector<double> grid = signal_grid(cfg);
    std::vector<RiskCurve> curves;

    // radial references are sparsity-independent; one curve each
    for (const std::string& name : {std::string("mle"), std::string("bnn-hyper")}) {
        const DecisionRule rule = make_rule(ctx, name);
        curves.push_back(risk_curve_sparse(rule, cfg.p, grid, 1, cfg.sparse_radial_n_mc,
                                           mix_seed(cfg.seed, fnv1a(name))));
        curves.back().sparsity.reset();
    }

    const DecisionRule horseshoe = make_rule(ctx, "horseshoe");
    for (int k : sparsity_grid(cfg.p)) {
        curves.push_back(risk_curve_sparse(horseshoe, cfg.p, grid, k, cfg.hs_n_mc,
                                           mix_seed(cfg.seed, 0x6873, std::uint64_t(k))));
        std::cerr << "horseshoe-risk: k=" << k << " done\n";
    }
    const fs::path path = ctx.out_dir / "horseshoe_risk.csv";
    save_risk_curves(curves, path.string());
    ctx.note_output(path);
    ctx.write_manifest("horseshoe-risk");
    return 0;
}

int run_predictive_risk(RunContext& ctx) {
    const ExperimentConfig& cfg = ctx.effective;
    PredictiveProblem problem;
    problem.p = cfg.p;
    problem.v_x = cfg.v_x;
    problem.v_y = cfg.v_y;
    problem.prior = PredictivePrior::beta_prime();
    problem.validate();

    const std::vector<double> grid = signal_grid(cfg);
    const fs::path path = ctx.out_dir / "predictive_risk.csv";
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string());
    }
    out << "r,kl_risk,stderr,estimator,p,v_x,v_y\n";
    const std::vector<std::pair<std::string, PredictiveEstimator>> estimators = {
        {"bnn-hyper", PredictiveEstimator::Bayes},
        {"unbiased", PredictiveEstimator::Unbiased},
    };
    for (const auto& [name, estimator] : estimators) {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const std::vector<double> theta = sparse_theta(grid[i], 1, cfg.p);
            const KlRiskEstimate estimate =
                kl_risk_mc(problem, estimator, theta, cfg.kl_outer, cfg.kl_inner,
                           mix_seed(cfg.seed, fnv1a(name), i));
            out << format_double(grid[i]) << "," << format_double(estimate.risk) << ","
                << format_double(estimate.stderr_) << "," << name << "," << cfg.p << ","
                << format_double(cfg.v_x) << "," << format_double(cfg.v_y) << "\n";
        }
        std::cerr << "predictive-risk: " << name << " done\n";
    }
    out.close();
    ctx.note_output(path);
    ctx.write_manifest("predictive-risk");
    return 0;
}

int run_diagnostics(RunContext& ctx) {
    const ExperimentConfig& cfg = ctx.effective;
    bool all_pass = true;

    // F(lambda) positivity and monotonicity for p in {5,6,10,25,50}
    for (int p : {5, 6, 10, 25, 50}) {
        const double a = double(p) - 2.0;
        const fs::path path = ctx.out_dir / ("diagnostics_F_p" + std::to_string(p) + ".csv");
        std::ofstream out(path);
        out << "lambda,F\n";
        bool positive = true, increasing = true;
        double previous = -1.0;
        for (int i = 0; i < 200; ++i) {
            const double lambda = std::pow(10.0, -6.0 + 12.0 * i / 199.0);
            const double value = superharmonic_F(a, lambda);
            out << format_double(lambda) << "," << format_double(value) << "\n";
            positive = positive && value > 0.0;
            if (i > 0) increasing = increasing && value > previous;
            previous = value;
        }
        ctx.note_output(path);
        const bool pass = positive && increasing;
        all_pass = all_pass && pass;
        std::cout << (pass ? "PASS" : "FAIL") << " F-positivity p=" << p << "\n";
    }

    // Laplacian of sqrt(m) for the BetaPrime marginal, r in (0.1, 30]
    {
        std::vector<double> radii;
        for (int i = 2; i <= 299; ++i) {
            radii.push_back(i / 10.0);
        }
        const auto laplacians = betaprime_sqrt_marginal_laplacians(std::max(cfg.p, 5), radii);
        const fs::path path = ctx.out_dir / "diagnostics_laplacian.csv";
        std::ofstream out(path);
        out << "r,laplacian\n";
        bool pass = true;
        for (std::size_t i = 0; i < radii.size(); ++i) {
            out << format_double(radii[i]) << "," << format_double(laplacians[i]) << "\n";
            pass = pass && laplacians[i] <= 1e-6;
        }
        ctx.note_output(path);
        all_pass = all_pass && pass;
        std::cout << (pass ? "PASS" : "FAIL") << " sqrt-marginal superharmonicity\n";
    }

    // fixed-scale sqrt-marginal probe: positive Laplacians are reported,
    // not gated (the violation region is not pinned down by theory)
    const MixingSample fixed_sample =
        build_mixing_sample(cfg.fixed_spec(), std::size_t(cfg.m_v), cfg.seed);
    {
        std::vector<double> radii;
        for (int i = 2; i <= 299; ++i) radii.push_back(i / 10.0);
        const auto laplacians =
            mixture_sqrt_marginal_laplacians(fixed_sample, std::max(cfg.p, 5), radii);
        const fs::path path = ctx.out_dir / "diagnostics_laplacian_fixed.csv";
        std::ofstream out(path);
        out << "r,laplacian\n";
        long positives = 0;
        for (std::size_t i = 0; i < radii.size(); ++i) {
            out << format_double(radii[i]) << "," << format_double(laplacians[i]) << "\n";
            if (laplacians[i] > 1e-6) ++positives;
        }
        ctx.note_output(path);
        std::cout << "INFO fixed-scale sqrt-marginal probe: " << positives
                  << " node(s) with positive Laplacian on (0.1, 30]\n";
    }

    // stretched-exponential tail probe for the fixed-scale marginal
    {
        const MixingSample& sample = fixed_sample;
        std::vector<double> radii;
        for (double r = 20.0; r <= 120.0; r += 10.0) radii.push_back(r);
        const TailDecayFit fit = tail_decay_probe(sample, cfg.p, cfg.depth, radii);
        const fs::path path = ctx.out_dir / "diagnostics_tail.csv";
        std::ofstream out(path);
        out << "r,log_m_hat\n";
        for (std::size_t i = 0; i < radii.size(); ++i) {
            out << format_double(radii[i]) << "," << format_double(fit.log_m_hat[i]) << "\n";
        }
        ctx.note_output(path);
        const bool pass = fit.slope < 0.0;
        all_pass = all_pass && pass;
        std::cout << (pass ? "PASS" : "FAIL") << " tail-decay slope = " << fit.slope
                  << " (stderr " << fit.slope_stderr << ")\n";
        ctx.cache_notes.push_back("tail fit: slope=" + format_double(fit.slope) +
                                  " intercept=" + format_double(fit.intercept));
    }

    ctx.write_manifest("diagnostics");
    return all_pass ? 0 : 2;
}

int run_plot(RunContext& ctx, const std::string& input, const std::string& output,
             const std::string& title) {
    const auto curves = load_risk_curves(input);
    if (curves.empty()) {
        throw std::runtime_error("plot: no curves in " + input);
    }
    PlotOptions options;
    options.title = title.empty() ? fs::path(input).filename().string() : title;
    options.reference_level = double(curves.front().p);
    options.provenance = std::string("source: ") + fs::path(input).filename().string() +
                         "; tool: " + kVersion +
                         "; config-hash: " + hex64(fnv1a(ctx.effective.serialize()));
    const fs::path path = output.empty() ? ctx.out_dir / "risk_plot.svg" : fs::path(output);
    write_text_file(path, render_risk_curves_svg(curves, options));
    ctx.note_output(path);
    ctx.write_manifest("plot");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayes shrinkage rules from deep ReLU BNN priors: risk simulation, "
                 "diagnostics, and predictive density estimation"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    ExperimentConfig flags;  // staging area for command-line overrides
    const ExperimentConfig defaults;

    app.add_option("--config", config_path, "configuration file (key = value)");
    app.add_option("--p", flags.p, "dimension of the location model");
    std::string rules_csv;
    app.add_option("--rules", rules_csv, "comma-separated rule list");
    app.add_option("--depth", flags.depth, "network depth d");
    std::string widths_csv, scales_csv, keeps_csv;
    app.add_option("--widths", widths_csv, "hidden widths, comma-separated");
    app.add_option("--scales", scales_csv, "layer scales, comma-separated");
    app.add_option("--keep-probs", keeps_csv, "dropout keep probabilities");
    app.add_option("--input-norm", flags.input_norm, "||x||");
    app.add_option("--r-max", flags.r_max, "largest signal norm");
    app.add_option("--r-step", flags.r_step, "signal norm step");
    app.add_option("--table-points", flags.table_points, "shrinkage grid size");
    app.add_option("--m-v", flags.m_v, "mixing sample size M_v");
    app.add_option("--n-mc", flags.n_mc, "Monte Carlo draws per point");
    app.add_option("--k-dir", flags.k_dir, "random directions per signal norm");
    app.add_option("--seed", flags.seed, "master seed");
    app.add_option("--hs-iterations", flags.hs_iterations, "Gibbs iterations");
    app.add_option("--hs-burn-in", flags.hs_burn_in, "Gibbs burn-in");
    app.add_option("--hs-thin", flags.hs_thin, "Gibbs thinning");
    app.add_option("--hs-n-mc", flags.hs_n_mc, "horseshoe Monte Carlo draws");
    app.add_option("--sparse-radial-n-mc", flags.sparse_radial_n_mc,
                   "radial-rule draws in the sparsity sweep");
    app.add_option("--signal-points", flags.signal_points, "signal grid points");
    app.add_option("--v-x", flags.v_x, "past observation variance");
    app.add_option("--v-y", flags.v_y, "future observation variance");
    app.add_option("--kl-outer", flags.kl_outer, "KL outer replicates");
    app.add_option("--kl-inner", flags.kl_inner, "KL inner draws");
    app.add_option("--out-dir", flags.out_dir, "output directory");
    app.add_flag("--quick", flags.quick, "desk-scale parameters");

    auto* sub_table = app.add_subcommand("shrinkage-table", "build and persist shrinkage tables");
    auto* sub_risk = app.add_subcommand("risk-curve", "Monte Carlo risk over signal norms");
    auto* sub_hs = app.add_subcommand("horseshoe-risk", "sparsity sweep with the horseshoe");
    auto* sub_pred = app.add_subcommand("predictive-risk", "KL risk of predictive densities");
    auto* sub_diag = app.add_subcommand("diagnostics", "minimaxity diagnostics");
    auto* sub_plot = app.add_subcommand("plot", "render a risk CSV to SVG");
    std::string plot_input, plot_output, plot_title;
    sub_plot->add_option("--input", plot_input, "risk curve CSV")->required();
    sub_plot->add_option("--output", plot_output, "SVG path");
    sub_plot->add_option("--title", plot_title, "plot title");

    CLI11_PARSE(app, argc, argv);

    try {
        ExperimentConfig config = config_path.empty() ? ExperimentConfig{}
                                                      : ExperimentConfig::load(config_path);
        // flags override file values
        const auto overridden = [&](const char* name) { return app.count(name) > 0; };
        if (overridden("--p")) config.p = flags.p;
        if (overridden("--depth")) config.depth = flags.depth;
        if (overridden("--input-norm")) config.input_norm = flags.input_norm;
        if (overridden("--r-max")) config.r_max = flags.r_max;
        if (overridden("--r-step")) config.r_step = flags.r_step;
        if (overridden("--table-points")) config.table_points = flags.table_points;
        if (overridden("--m-v")) config.m_v = flags.m_v;
        if (overridden("--n-mc")) config.n_mc = flags.n_mc;
        if (overridden("--k-dir")) config.k_dir = flags.k_dir;
        if (overridden("--seed")) config.seed = flags.seed;
        if (overridden("--hs-iterations")) config.hs_iterations = flags.hs_iterations;
        if (overridden("--hs-burn-in")) config.hs_burn_in = flags.hs_burn_in;
        if (overridden("--hs-thin")) config.hs_thin = flags.hs_thin;
        if (overridden("--hs-n-mc")) config.hs_n_mc = flags.hs_n_mc;
        if (overridden("--sparse-radial-n-mc"))
            config.sparse_radial_n_mc = flags.sparse_radial_n_mc;
        if (overridden("--signal-points")) config.signal_points = flags.signal_points;
        if (overridden("--v-x")) config.v_x = flags.v_x;
        if (overridden("--v-y")) config.v_y = flags.v_y;
        if (overridden("--kl-outer")) config.kl_outer = flags.kl_outer;
        if (overridden("--kl-inner")) config.kl_inner = flags.kl_inner;
        if (overridden("--out-dir")) config.out_dir = flags.out_dir;
        if (flags.quick) config.quick = true;
        if (overridden("--rules")) {
            config.rules.clear();
            for (const auto& r : split(rules_csv, ',')) config.rules.push_back(r);
        }
        auto parse_int_list = [](const std::string& csv) {
            std::vector<int> out;
            for (const auto& tok : split(csv, ',')) out.push_back(int(parse_int(tok)));
            return out;
        };
        auto parse_double_list = [](const std::string& csv) {
            std::vector<double> out;
            for (const auto& tok : split(csv, ',')) out.push_back(parse_double(tok));
            return out;
        };
        if (overridden("--widths")) config.widths = parse_int_list(widths_csv);
        if (overridden("--scales")) config.scales = parse_double_list(scales_csv);
        if (overridden("--keep-probs")) config.keep_probs = parse_double_list(keeps_csv);

        // out-dir precedence: flag > file > BNNLAB_OUT > "out"
        if (!overridden("--out-dir") && config.out_dir == defaults.out_dir) {
            if (const char* env = std::getenv("BNNLAB_OUT")) {
                config.out_dir = env;
            }
        }
        config.validate();

        RunContext ctx;
        ctx.requested = config;
        ctx.effective = config.quick ? config.quick_scaled() : config;
        ctx.out_dir = config.out_dir;
        fs::create_directories(ctx.out_dir);

        if (sub_table->parsed()) return run_shrinkage_table(ctx);
        if (sub_risk->parsed()) return run_risk_curve(ctx);
        if (sub_hs->parsed()) return run_horseshoe_risk(ctx);
        if (sub_pred->parsed()) return run_predictive_risk(ctx);
        if (sub_diag->parsed()) return run_diagnostics(ctx);
        if (sub_plot->parsed()) return run_plot(ctx, plot_input, plot_output, plot_title);
        std::cerr << "no subcommand\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
