#pragma once

namespace survfilter {

// One-step coefficients frozen at (x_k, y_k, t_k).
struct KernelParams {
    double dt = 0.0;     // Delta_k
    double sigma = 0.0;  // signal volatility at (x_k, t_k)
    double b = 0.0;      // signal drift at (x_k, t_k)
    double nu = 0.0;     // shared observation volatility at (y_k, t_k)
    double delta = 0.0;  // idiosyncratic observation volatility at (y_k, t_k)
    double h = 0.0;      // observation drift at (y_k, x_k, t_k)
};

// Observation-likelihood kernel of the Euler pair transition:
//   g = (2 pi dt)^{-3/2} sigma^{-2} delta^{-1}
//       * exp(-(nu^2 / (2 delta^2 dt)) ((x' - m1)/sigma - (y' - m2)/nu)^2)
// with m1 = x_k + b dt, m2 = y_k + h dt. Proportional (by the deterministic
// per-step factor 2 pi dt sigma^2) to the conditional density of y' given
// (x_k, y_k, x').
double kernel_g(const KernelParams& p, double x_k, double y_k, double x_next, double y_next);

// Lognormal variant for exact geometric dynamics: the same residual in
// log-space, with normalization sigma^2 delta x'^2 y' in place of
// sigma^2 delta. Requires strictly positive state values.
struct LognormalKernelParams {
    double mu = 0.0;
    double sigma = 0.0;
    double r = 0.0;
    double nu = 0.0;
    double delta = 0.0;
    double dt = 0.0;
};

double kernel_g_lognormal(const LognormalKernelParams& p, double x_k, double y_k, double x_next,
                          double y_next);

}  // namespace survfilter
