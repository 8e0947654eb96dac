#pragma once

#include <span>

namespace survfilter {

// One Euler step of the continuous scheme, pinned at both ends. var is the
// bridge variance Delta_k * sigma(x_k, t_k)^2, with sigma frozen at the left
// endpoint.
struct BridgeParams {
    double x_left = 0.0;
    double x_right = 0.0;
    double var = 0.0;
};

// CDF of the minimum of the pinned bridge:
//   H(u) = exp(-2 (u - x_left)(u - x_right) / var)  for u <= min(x_left, x_right),
//   H(u) = 1 otherwise.
double bridge_min_cdf(const BridgeParams& p, double u);

// Probability that the pinned bridge stays above the barrier:
//   G(a) = (1 - exp(-2 (x_left - a)(x_right - a) / var)) * 1{x_left >= a, x_right >= a}.
// Equals 1 - H(a) when both endpoints are above the barrier.
double no_cross_factor(const BridgeParams& p, double barrier);

// Product of no_cross_factor over consecutive path points. path has l-k+1
// values; vols and dts have one entry per interval. Fewer than two path points
// is an empty product and returns 1.
double interval_survival_product(std::span<const double> path, std::span<const double> vols,
                                 std::span<const double> dts, double barrier);

// Inverse of bridge_min_cdf at a uniform draw u01 in (0,1):
//   m = ((x_left + x_right) - sqrt((x_left - x_right)^2 - 2 var ln u01)) / 2.
double sample_interval_min(const BridgeParams& p, double u01);

}  // namespace survfilter
