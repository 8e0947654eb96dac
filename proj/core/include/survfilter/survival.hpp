#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "survfilter/diffusion_model.hpp"
#include "survfilter/filter.hpp"
#include "survfilter/rng.hpp"

namespace survfilter {

struct McEstimate {
    double value = 0.0;
    double std_err = 0.0;
};

// Probability that the continuous Euler signal started at x at t_obs stays
// above the barrier until t_end: mean over `trials` Euler segments of the
// product of per-step no-crossing bridge factors. Returns {0,0} when x is at
// or below the barrier and {1,0} when t_end == t_obs (empty product).
McEstimate fbar_mc(const DiffusionModel& model, double x, double t_obs, double t_end,
                   std::size_t steps, std::size_t trials, double barrier, RngStream& rng);

// Same quantity in closed form for geometric Brownian motion over a horizon of
// length u, clamped to [0,1]. Returns 0 when x <= barrier.
double gbm_survival_closed_form(double x, double mu, double sigma, double barrier, double u);

// sum_i posterior_i * fbar_values_i, clamped to [0,1].
double conditional_survival(const FilterState& filter, std::span<const double> fbar_values);

struct SurvivalCurveMeta {
    std::uint64_t seed = 0;
    std::size_t trials = 0;
    std::size_t grid_size = 0;
    std::size_t obs_steps = 0;
    std::size_t fbar_steps = 0;
    std::string fbar_method;  // "closed-form" or "monte-carlo"
};

struct SurvivalCurve {
    std::vector<double> horizons;
    std::vector<double> probabilities;  // conditional survival per horizon
    std::vector<double> std_errs;
    SurvivalCurveMeta meta;
};

struct CurveConfig {
    std::size_t budget = 1000;        // quantization budget N
    std::size_t fbar_steps = 50;      // Euler steps per continuation segment
    std::size_t fbar_trials = 100000; // Monte Carlo trials M
    KernelChoice kernel = KernelChoice::gaussian;
    bool force_mc = false;            // bypass the closed form for gbm
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

// Assembles the curve from a prebuilt quantization and filter posterior: for
// each horizon, evaluates the post-observation survival at every terminal grid
// point (closed form for the gbm preset unless force_mc) and takes the
// posterior-weighted sum. Monte Carlo evaluations reuse one noise table across
// horizons and grid points, which keeps curves smooth and pathwise monotone.
SurvivalCurve survival_curve(const DiffusionModel& model, const MarginalQuantization& mq,
                             const FilterState& filter, double barrier,
                             std::span<const double> horizons, const CurveConfig& config);

// Convenience overload that builds the quantization and runs the filter on the
// given observations (m = obs.size()-1 regular steps up to t_obs).
SurvivalCurve survival_curve(const DiffusionModel& model, std::span<const double> obs,
                             double t_obs, double barrier, std::span<const double> horizons,
                             const CurveConfig& config);

}  // namespace survfilter
