#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "survfilter/diffusion_model.hpp"
#include "survfilter/filter.hpp"

namespace survfilter {

// Flat, human-editable run description. Parsed from key=value lines ('#'
// starts a comment); presets are named bundles that any key can override.
//
// Keys: preset, model, mu, sigma, delta, lambda, theta, r, nu, x0, y0,
//       barrier, t_obs, obs_steps, horizons, fbar_steps, fbar_trials, budget,
//       kernel, seed, obs, out_dir, validate, force_mc_fbar, delta_sweep,
//       delta_sweep_values, oracle_particles, oracle_inner_trials,
//       oracle_exact_paths, validate_horizons, threads, use_cache
//
// horizons accepts "lo:step:hi" or a comma-separated list.
struct RunConfig {
    std::string preset;        // "", "gbm-fig1", "ou-fig3"
    std::string model = "gbm"; // "gbm" or "ou"

    // gbm parameters (r and nu default to mu and sigma)
    double mu = 0.03;
    double sigma = 0.03;
    // ou parameters
    double lambda = 0.18;
    double theta = 0.35;

    double delta = 0.1;
    double x0 = 86.3;
    double y0 = 86.3;

    double barrier = 76.0;
    double t_obs = 1.0;
    std::size_t obs_steps = 50;
    std::vector<double> horizons;

    std::size_t budget = 1000;
    std::size_t fbar_steps = 50;
    std::size_t fbar_trials = 100000;
    KernelChoice kernel = KernelChoice::lognormal;

    std::uint64_t seed = 42;
    std::string obs_source = "simulate";  // "simulate" or a CSV path
    std::string out_dir = "out";

    bool validate = false;
    bool force_mc_fbar = false;
    bool delta_sweep = false;
    std::vector<double> delta_sweep_values = {0.1, 0.3, 0.5};

    std::size_t oracle_particles = 200000;
    std::size_t oracle_inner_trials = 64;
    bool oracle_exact_paths = false;
    std::size_t validate_horizon_count = 3;  // evenly spaced subset used by --validate

    unsigned threads = 0;  // 0: hardware concurrency
    bool use_cache = true;

    // Throws ConfigError with the offending field name.
    void check() const;

    DiffusionModel make_model() const;
    DiffusionModel make_model_with_delta(double delta_override) const;
};

// Applies a named preset ("gbm-fig1", "ou-fig3"); throws ConfigError for
// unknown names.
void apply_preset(RunConfig& config, const std::string& name);

// Parses key=value lines into the config. Unknown keys throw ConfigError.
void apply_config_line(RunConfig& config, const std::string& line);
RunConfig parse_config_file(const std::string& path);

std::vector<double> parse_horizons(const std::string& text);

}  // namespace survfilter
