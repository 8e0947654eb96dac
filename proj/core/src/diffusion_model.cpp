#include "survfilter/diffusion_model.hpp"

#include <cmath>

#include "survfilter/errors.hpp"

namespace survfilter {

DiffusionModel DiffusionModel::gbm_preset(double mu, double sigma, double delta, double x0,
                                          double y0) {
    if (!(sigma > 0.0) || !(delta > 0.0))
        throw InvalidParameter("gbm preset requires sigma > 0 and delta > 0");
    if (!(x0 > 0.0) || !(y0 > 0.0))
        throw InvalidParameter("gbm preset requires positive initial values");
    DiffusionModel m;
    m.drift_signal = [mu](double x, double) { return mu * x; };
    m.vol_signal = [sigma](double x, double) { return sigma * x; };
    m.vol_signal_deriv = [sigma](double, double) { return sigma; };
    m.drift_obs = [mu](double y, double, double) { return mu * y; };
    m.vol_obs_shared = [sigma](double y, double) { return sigma * y; };
    m.vol_obs_idio = [delta](double y, double) { return delta * y; };
    m.x0 = x0;
    m.y0 = y0;
    m.kind = ModelKind::gbm;
    m.gbm = GbmParams{mu, sigma, mu, sigma, delta};
    return m;
}

DiffusionModel DiffusionModel::ou_preset(double lambda, double theta, double sigma, double delta,
                                         double x0, double y0) {
    if (!(sigma > 0.0) || !(delta > 0.0))
        throw InvalidParameter("ou preset requires sigma > 0 and delta > 0");
    if (!(lambda >= 0.0)) throw InvalidParameter("ou preset requires lambda >= 0");
    DiffusionModel m;
    m.drift_signal = [lambda, theta](double x, double) { return lambda * (theta - x); };
    m.vol_signal = [sigma](double, double) { return sigma; };
    m.vol_signal_deriv = [](double, double) { return 0.0; };
    m.drift_obs = [lambda, theta](double y, double, double) { return lambda * (theta - y); };
    m.vol_obs_shared = [sigma](double, double) { return sigma; };
    m.vol_obs_idio = [delta](double, double) { return delta; };
    m.x0 = x0;
    m.y0 = y0;
    m.kind = ModelKind::ou;
    m.ou = OuParams{lambda, theta, sigma, delta};
    return m;
}

void DiffusionModel::check_coefficients(double x_lo, double x_hi, double y_lo, double y_hi,
                                        double t_hi, int samples) const {
    if (samples < 2) samples = 2;
    for (int i = 0; i < samples; ++i) {
        double f = static_cast<double>(i) / (samples - 1);
        double x = x_lo + f * (x_hi - x_lo);
        double y = y_lo + f * (y_hi - y_lo);
        for (int j = 0; j < samples; ++j) {
            double t = t_hi * static_cast<double>(j) / (samples - 1);
            if (!(vol_signal(x, t) > 0.0))
                throw InvalidParameter("vol_signal must be positive on the working domain");
            if (!(vol_obs_shared(y, t) > 0.0))
                throw InvalidParameter("vol_obs_shared must be positive on the working domain");
            if (!(vol_obs_idio(y, t) > 0.0))
                throw InvalidParameter("vol_obs_idio must be positive on the working domain");
        }
    }
}

std::string DiffusionModel::kind_name() const {
    switch (kind) {
        case ModelKind::gbm: return "gbm";
        case ModelKind::ou: return "ou";
        default: return "custom";
    }
}

}  // namespace survfilter
