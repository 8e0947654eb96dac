#pragma once

#include <cstddef>
#include <vector>

namespace survfilter {

// Optimal quadratic quantizer of N(0,1): sorted levels with the Gaussian mass
// of their Voronoi cells. Stationary: each level is the conditional mean of
// its cell.
struct ScalarQuantizer {
    std::vector<double> levels;
    std::vector<double> weights;

    // Exact quadratic distortion E(Z - hat Z)^2 of this grid.
    double distortion() const;

    // max_i |E[Z 1{cell_i}] / weight_i - level_i|
    double stationarity_residual() const;
};

// Solves the first-order conditions by damped Newton on the sorted levels
// (tridiagonal Jacobian), falling back to Lloyd iteration if Newton stalls.
// Throws SolverFailure if neither converges.
ScalarQuantizer optimal_gaussian_quantizer(std::size_t n);

}  // namespace survfilter
