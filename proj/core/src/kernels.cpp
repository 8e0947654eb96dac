#include "survfilter/kernels.hpp"

#include <cmath>

#include "survfilter/errors.hpp"
#include "survfilter/math.hpp"

namespace survfilter {

double kernel_g(const KernelParams& p, double x_k, double y_k, double x_next, double y_next) {
    if (!(p.dt > 0.0 && p.sigma > 0.0 && p.nu > 0.0 && p.delta > 0.0))
        throw InvalidParameter("kernel_g: dt, sigma, nu, delta must be positive");
    const double m1 = x_k + p.b * p.dt;
    const double m2 = y_k + p.h * p.dt;
    const double resid = (x_next - m1) / p.sigma - (y_next - m2) / p.nu;
    const double rate = p.nu * p.nu / (2.0 * p.delta * p.delta * p.dt);
    const double pref =
        1.0 / (std::pow(2.0 * kPi * p.dt, 1.5) * p.sigma * p.sigma * p.delta);
    return pref * std::exp(-rate * resid * resid);
}

double kernel_g_lognormal(const LognormalKernelParams& p, double x_k, double y_k, double x_next,
                          double y_next) {
    if (!(p.dt > 0.0 && p.sigma > 0.0 && p.nu > 0.0 && p.delta > 0.0))
        throw InvalidParameter("kernel_g_lognormal: dt, sigma, nu, delta must be positive");
    if (!(x_k > 0.0 && y_k > 0.0 && x_next > 0.0 && y_next > 0.0))
        throw InvalidParameter("kernel_g_lognormal: state values must be positive");
    const double m1 = std::log(x_k) + (p.mu - 0.5 * p.sigma * p.sigma) * p.dt;
    const double m2 =
        std::log(y_k) + (p.r - 0.5 * p.nu * p.nu - 0.5 * p.delta * p.delta) * p.dt;
    const double resid = (std::log(x_next) - m1) / p.sigma - (std::log(y_next) - m2) / p.nu;
    const double rate = p.nu * p.nu / (2.0 * p.delta * p.delta * p.dt);
    const double pref = 1.0 / (std::pow(2.0 * kPi * p.dt, 1.5) * p.sigma * p.sigma * p.delta *
                               x_next * x_next * y_next);
    return pref * std::exp(-rate * resid * resid);
}

}  // namespace survfilter
