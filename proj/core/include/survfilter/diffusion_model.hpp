#pragma once

#include <functional>
#include <string>

namespace survfilter {

// Coefficient of the signal equation, evaluated at (x, t).
using SignalCoeff = std::function<double(double x, double t)>;
// Coefficient of the observation equation, evaluated at (y, t).
using ObsCoeff = std::function<double(double y, double t)>;
// Observation drift, evaluated at (y, x, t).
using ObsDrift = std::function<double(double y, double x, double t)>;

struct GbmParams {
    double mu = 0.0;     // signal drift rate
    double sigma = 0.0;  // signal volatility
    double r = 0.0;      // observation drift rate
    double nu = 0.0;     // observation loading on the shared Brownian motion
    double delta = 0.0;  // observation idiosyncratic volatility
};

struct OuParams {
    double lambda = 0.0;  // mean-reversion speed (shared by signal and observation)
    double theta = 0.0;   // long-run level
    double sigma = 0.0;   // shared diffusive volatility
    double delta = 0.0;   // observation idiosyncratic volatility
};

enum class ModelKind { custom, gbm, ou };

// Signal/observation diffusion pair
//   dX = b(X,t) dt + sigma(X,t) dW
//   dY = h(Y,X,t) dt + nu(Y,t) dW + delta(Y,t) dWtilde
// with W and Wtilde independent. vol_signal_deriv is d(sigma)/dx, needed by the
// quantized-path ODE.
struct DiffusionModel {
    SignalCoeff drift_signal;
    SignalCoeff vol_signal;
    SignalCoeff vol_signal_deriv;
    ObsDrift drift_obs;
    ObsCoeff vol_obs_shared;
    ObsCoeff vol_obs_idio;
    double x0 = 0.0;
    double y0 = 0.0;

    ModelKind kind = ModelKind::custom;
    GbmParams gbm{};
    OuParams ou{};

    // dX = X(mu dt + sigma dW), dY = Y(mu dt + sigma dW + delta dWtilde).
    static DiffusionModel gbm_preset(double mu, double sigma, double delta, double x0, double y0);

    // dX = lambda(theta - X)dt + sigma dW,
    // dY = lambda(theta - Y)dt + sigma dW + delta dWtilde.
    static DiffusionModel ou_preset(double lambda, double theta, double sigma, double delta,
                                    double x0, double y0);

    // Samples sigma, nu, delta over [x_lo,x_hi] x [y_lo,y_hi] x [0,t_hi] and
    // throws InvalidParameter on a non-positive value.
    void check_coefficients(double x_lo, double x_hi, double y_lo, double y_hi, double t_hi,
                            int samples = 16) const;

    std::string kind_name() const;
};

}  // namespace survfilter
