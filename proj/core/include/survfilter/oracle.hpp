#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "survfilter/diffusion_model.hpp"
#include "survfilter/filter.hpp"

namespace survfilter {

// Brute-force particle estimate of the same conditional survival probability
// the quantized filter computes: simulate prior signal paths, weight each by
// its accumulated observation likelihood, multiply by the no-crossing product
// up to the observation horizon and the post-observation survival, and take
// the self-normalized ratio. Deliberately free of any recursion or grid so it
// shares no structure with the filter.
struct OracleConfig {
    std::size_t particles = 200000;
    std::size_t inner_trials = 64;  // Monte Carlo size of each per-particle survival estimate
    std::size_t fbar_steps = 50;
    KernelChoice kernel = KernelChoice::gaussian;
    bool exact_paths = false;       // exact scheme instead of Euler (presets only)
    bool closed_form_fbar = false;  // gbm preset: closed-form survival instead of inner MC
    bool keep_particle_values = false;  // retain per-particle weights/contributions
    std::uint64_t seed = 1;
    unsigned threads = 1;
};

struct OracleResult {
    std::vector<double> probabilities;  // one per horizon
    double effective_sample_size = 0.0;
    bool degenerate_weights = false;  // effective sample size below 10

    // Populated with keep_particle_values: normalized likelihood weight per
    // particle, and the per-horizon survival contribution K * Fbar (row-major
    // particles x horizons). Enables resampling-based interval estimates.
    std::vector<double> particle_weights;
    std::vector<double> particle_survival;
};

OracleResult particle_conditional_survival(const DiffusionModel& model,
                                           std::span<const double> obs, double t_obs,
                                           double barrier, std::span<const double> horizons,
                                           const OracleConfig& config);

}  // namespace survfilter
