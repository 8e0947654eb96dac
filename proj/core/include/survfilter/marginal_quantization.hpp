#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "survfilter/diffusion_model.hpp"
#include "survfilter/product_quantizer.hpp"
#include "survfilter/time_grid.hpp"

namespace survfilter {

// Integrates the quantized-path ODE
//   dx = (b(x,t) - 1/2 sigma sigma'(x,t)) dt + sigma(x,t) dchi(t)
// from x0 for every codebook path, with classical RK4 on `substeps`
// refinements per grid step; dchi comes from the closed-form KL derivative.
// Returns path_count x (m+1) signal values at grid times.
std::vector<std::vector<double>> quantized_diffusion_codebook(const DiffusionModel& model,
                                                              const BrownianCodebook& cb,
                                                              const TimeGrid& grid,
                                                              std::size_t substeps = 10);

// Per-time-step grids extracted from the functional codebook. At each k >= 1
// the Brownian marginals are sorted ascending and the paired signal values
// carried along by the same permutation; k = 0 is the singleton ({0}, {x0}).
// Transition matrices between consecutive grids use Gaussian cell masses with
// midpoint Voronoi edges and are built on demand.
class MarginalQuantization {
public:
    MarginalQuantization() = default;
    MarginalQuantization(std::vector<std::vector<double>> brownian,
                         std::vector<std::vector<double>> signal,
                         std::vector<std::vector<double>> weights, std::vector<double> times);

    std::size_t step_count() const { return times_.size() - 1; }  // m
    std::size_t grid_size(std::size_t k) const { return brownian_[k].size(); }
    double time(std::size_t k) const { return times_[k]; }
    double dt(std::size_t k) const { return times_[k] - times_[k - 1]; }  // k >= 1

    const std::vector<double>& brownian_grid(std::size_t k) const { return brownian_[k]; }
    const std::vector<double>& signal_grid(std::size_t k) const { return signal_[k]; }
    const std::vector<double>& weights(std::size_t k) const { return weights_[k]; }

    // Row-stochastic transition matrix from grid k-1 to grid k (k >= 1),
    // row-major with grid_size(k-1) rows. Computed lazily and cached.
    const std::vector<double>& transition(std::size_t k) const;

    // Fills one row of transition k without touching the cache.
    void transition_row(std::size_t k, std::size_t i, std::vector<double>& row) const;

private:
    std::vector<std::vector<double>> brownian_;
    std::vector<std::vector<double>> signal_;
    std::vector<std::vector<double>> weights_;
    std::vector<double> times_;
    mutable std::vector<std::vector<double>> transitions_;
};

// Sorts the marginals of the Brownian codebook at every time step, carries the
// signal values through the same permutation and packages the result. Ties in
// the Brownian marginals are broken by a deterministic index-scaled 1e-12
// perturbation; exact duplicates afterwards raise DegenerateGrid.
MarginalQuantization marginal_quantization(const BrownianCodebook& cb,
                                           const std::vector<std::vector<double>>& signal_paths,
                                           const TimeGrid& grid, const DiffusionModel& model);

// Convenience: product quantizer -> codebook -> ODE -> marginal quantization.
MarginalQuantization build_marginal_quantization(const DiffusionModel& model,
                                                 const TimeGrid& grid, std::size_t budget,
                                                 std::size_t ode_substeps = 10);

// JSON cache of the grids (transitions are recomputed on load). Returns false
// when the file is missing or was written for a different key/version.
bool save_quantization_cache(const std::string& path, const std::string& key,
                             const MarginalQuantization& mq);
bool load_quantization_cache(const std::string& path, const std::string& key,
                             MarginalQuantization& out);

}  // namespace survfilter
