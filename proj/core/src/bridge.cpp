#include "survfilter/bridge.hpp"

#include <algorithm>
#include <cmath>

#include "survfilter/errors.hpp"

namespace survfilter {

namespace {
inline void require_var(double var) {
    if (!(var > 0.0)) throw InvalidParameter("bridge variance must be positive");
}
}  // namespace

double bridge_min_cdf(const BridgeParams& p, double u) {
    require_var(p.var);
    if (u > std::min(p.x_left, p.x_right)) return 1.0;
    return std::exp(-2.0 * (u - p.x_left) * (u - p.x_right) / p.var);
}

double no_cross_factor(const BridgeParams& p, double barrier) {
    require_var(p.var);
    if (p.x_left < barrier || p.x_right < barrier) return 0.0;
    // Large exponents underflow exp to 0, giving exactly 1: the correct limit.
    return -std::expm1(-2.0 * (p.x_left - barrier) * (p.x_right - barrier) / p.var);
}

double interval_survival_product(std::span<const double> path, std::span<const double> vols,
                                 std::span<const double> dts, double barrier) {
    if (path.size() < 2) return 1.0;  // empty product convention
    const std::size_t intervals = path.size() - 1;
    if (vols.size() != intervals || dts.size() != intervals)
        throw ShapeError("interval_survival_product: vols/dts must have one entry per interval");
    double prod = 1.0;
    for (std::size_t k = 0; k < intervals; ++k) {
        BridgeParams p{path[k], path[k + 1], dts[k] * vols[k] * vols[k]};
        prod *= no_cross_factor(p, barrier);
        if (prod == 0.0) return 0.0;
    }
    return prod;
}

double sample_interval_min(const BridgeParams& p, double u01) {
    require_var(p.var);
    if (!(u01 > 0.0 && u01 < 1.0))
        throw InvalidParameter("sample_interval_min: draw must lie in (0,1)");
    const double d = p.x_left - p.x_right;
    const double disc = d * d - 2.0 * p.var * std::log(u01);
    return 0.5 * ((p.x_left + p.x_right) - std::sqrt(disc));
}

}  // namespace survfilter
