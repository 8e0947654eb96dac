#pragma once

#include <cstddef>
#include <vector>

#include "survfilter/scalar_quantizer.hpp"
#include "survfilter/time_grid.hpp"

namespace survfilter {

// Karhunen-Loeve eigenvalue of Brownian motion on [0,T]:
// lambda_n = (T / (pi (n - 1/2)))^2, n >= 1.
double kl_eigenvalue(std::size_t n, double horizon);

// Matching eigenfunction e_n(t) = sqrt(2/T) sin(pi (n - 1/2) t / T) and its
// time derivative.
double kl_basis(std::size_t n, double horizon, double t);
double kl_basis_deriv(std::size_t n, double horizon, double t);

// Squared L2 path distortion of a product quantizer with the given
// per-coordinate sizes: sum_n lambda_n D(N_n) + sum_{n>d} lambda_n, where D is
// the N(0,1) quantizer distortion. Coordinates of size 1 contribute their full
// eigenvalue and are equivalent to truncation.
double allocation_distortion(const std::vector<std::size_t>& sizes, double horizon);

// Exact minimizer of allocation_distortion over non-increasing integer tuples
// with product <= budget (bounded DFS over all such tuples; ties broken toward
// fewer coordinates). Trailing sizes of 1 are dropped, so budget 1 yields the
// empty tuple (pure mean path).
std::vector<std::size_t> allocate_sizes(std::size_t budget, double horizon);

// Product quantizer of Brownian motion on [0, horizon].
struct ProductQuantizer {
    std::vector<std::size_t> sizes;
    std::vector<ScalarQuantizer> coords;
    std::vector<double> eigenvalues;
    double horizon = 0.0;

    static ProductQuantizer build(std::size_t budget, double horizon);

    std::size_t path_count() const;
    double distortion() const { return allocation_distortion(sizes, horizon); }
};

// The codebook: one smooth path per multi-index,
//   chi_i(t) = sum_n sqrt(lambda_n) level_{i_n} e_n(t),
// with weight equal to the product of the coordinate cell masses. coeffs holds
// the per-path KL coefficients sqrt(lambda_n) level_{i_n} so the paths can be
// evaluated (and differentiated) at arbitrary times.
struct BrownianCodebook {
    std::vector<std::vector<double>> paths;   // path_count x (m+1), at grid times
    std::vector<double> weights;              // path_count, sums to 1
    std::vector<std::vector<double>> coeffs;  // path_count x coord_count
    double horizon = 0.0;

    double value(std::size_t row, double t) const;
    double deriv(std::size_t row, double t) const;
};

// Evaluates the codebook on grid.times[0..obs_index]; the quantizer must be
// built for horizon = grid.obs_horizon().
BrownianCodebook brownian_codebook(const ProductQuantizer& pq, const TimeGrid& grid);

}  // namespace survfilter
