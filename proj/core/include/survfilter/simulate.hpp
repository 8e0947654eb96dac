#pragma once

#include <vector>

#include "survfilter/diffusion_model.hpp"
#include "survfilter/rng.hpp"
#include "survfilter/time_grid.hpp"

namespace survfilter {

// Joint discrete path. The signal runs over the full grid (n+1 values); the
// observation stops at the observation horizon (m+1 values).
struct PathPair {
    std::vector<double> signal;
    std::vector<double> obs;
};

// Euler step of the coupled pair; the same W increment drives both equations,
// plus an independent Wtilde increment in the observation.
PathPair simulate_pair(const DiffusionModel& model, const TimeGrid& grid, RngStream& rng);

// Exact-scheme variant for the gbm and ou presets (shared noise handled in
// closed form). Throws InvalidParameter for custom models.
PathPair simulate_pair_exact(const DiffusionModel& model, const TimeGrid& grid, RngStream& rng);

// Euler path of the signal over grid indices [k_start, k_end] starting at
// x_start. Returns k_end - k_start + 1 values.
std::vector<double> simulate_signal_segment(const DiffusionModel& model, double x_start,
                                            std::size_t k_start, std::size_t k_end,
                                            const TimeGrid& grid, RngStream& rng);

// x * exp((mu - sigma^2/2) dt + sigma sqrt(dt) z)
double exact_gbm_step(double x, double mu, double sigma, double dt, double z);

// theta + (x - theta) e^{-lambda dt} + sigma sqrt((1 - e^{-2 lambda dt}) / (2 lambda)) z,
// with the sigma sqrt(dt) z limit as lambda -> 0.
double exact_ou_step(double x, double lambda, double theta, double sigma, double dt, double z);

}  // namespace survfilter
