#ifndef BNNLAB_CONFIG_HPP
#define BNNLAB_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "bnnlab/mixing.hpp"

namespace bnnlab {

/// Experiment configuration. Defaults are the full-scale settings of the
/// simulation study; `--quick` swaps in the documented desk-scale values.
struct ExperimentConfig {
    int p = 5;
    std::vector<std::string> rules = {"mle", "bnn-fixed", "bnn-hyper", "bnn-dropout"};

    // network / mixing
    int depth = 3;
    std::vector<int> widths = {20, 20};
    std::vector<double> scales = {1.0, 1.0, 1.0};
    std::vector<double> keep_probs = {0.8, 0.8};
    double input_norm = 1.0;

    // radial risk grid
    double r_max = 500.0;
    double r_step = 1.0;

    // shrinkage table
    long table_points = 2500;

    // Monte Carlo scale
    long m_v = 200000;
    long n_mc = 50000;
    int k_dir = 10;
    std::uint64_t seed = 17;

    // horseshoe chain and sparsity sweep
    int hs_iterations = 3000;
    int hs_burn_in = 1000;
    int hs_thin = 2;
    long hs_n_mc = 500;
    long sparse_radial_n_mc = 5000;
    int signal_points = 6;  // equally spaced on [0, 2.5 sqrt(p)]

    // predictive problem
    double v_x = 1.0;
    double v_y = 1.0;
    long kl_outer = 2000;
    long kl_inner = 50;

    std::string out_dir = "out";
    bool quick = false;

    void validate() const;

    /// Desk-scale variant: M_v/4, N_mc -> 20000, K_dir -> 5, r-step x5,
    /// horseshoe N_mc -> 100, KL outer -> 500. Recorded in the manifest.
    ExperimentConfig quick_scaled() const;

    MixingSpec fixed_spec() const;
    MixingSpec dropout_spec() const;

    /// TOML-style `key = value` text; parse(serialize(c)) == c.
    std::string serialize() const;
    static ExperimentConfig parse(const std::string& text);
    static ExperimentConfig load(const std::string& path);

    bool operator==(const ExperimentConfig& other) const = default;
};

} // namespace bnnlab

#endif
