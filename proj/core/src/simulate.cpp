#include "survfilter/simulate.hpp"

#include <cmath>

#include "survfilter/errors.hpp"

namespace survfilter {

namespace {

inline void require_finite(double v, const char* where, std::size_t step) {
    if (!std::isfinite(v)) throw SimulationDiverged(where, step);
}

// Variance of the exact one-step OU stochastic integral.
inline double ou_step_variance(double lambda, double dt) {
    if (lambda <= 0.0) return dt;
    return -std::expm1(-2.0 * lambda * dt) / (2.0 * lambda);
}

}  // namespace

PathPair simulate_pair(const DiffusionModel& model, const TimeGrid& grid, RngStream& rng) {
    const std::size_t m = grid.obs_index;
    const std::size_t n = grid.end_index;
    PathPair p;
    p.signal.resize(n + 1);
    p.obs.resize(m + 1);
    p.signal[0] = model.x0;
    p.obs[0] = model.y0;

    for (std::size_t k = 0; k < n; ++k) {
        const double t = grid.times[k];
        const double dt = grid.dt(k);
        const double sq = std::sqrt(dt);
        const double dw = sq * rng.normal();
        const double x = p.signal[k];
        p.signal[k + 1] = x + model.drift_signal(x, t) * dt + model.vol_signal(x, t) * dw;
        require_finite(p.signal[k + 1], "simulate_pair[signal]", k + 1);
        if (k < m) {
            const double dwt = sq * rng.normal();
            const double y = p.obs[k];
            p.obs[k + 1] = y + model.drift_obs(y, x, t) * dt + model.vol_obs_shared(y, t) * dw +
                           model.vol_obs_idio(y, t) * dwt;
            require_finite(p.obs[k + 1], "simulate_pair[obs]", k + 1);
        }
    }
    return p;
}

PathPair simulate_pair_exact(const DiffusionModel& model, const TimeGrid& grid, RngStream& rng) {
    const std::size_t m = grid.obs_index;
    const std::size_t n = grid.end_index;
    PathPair p;
    p.signal.resize(n + 1);
    p.obs.resize(m + 1);
    p.signal[0] = model.x0;
    p.obs[0] = model.y0;

    if (model.kind == ModelKind::gbm) {
        const auto& g = model.gbm;
        for (std::size_t k = 0; k < n; ++k) {
            const double dt = grid.dt(k);
            const double sq = std::sqrt(dt);
            const double z1 = rng.normal();
            p.signal[k + 1] = exact_gbm_step(p.signal[k], g.mu, g.sigma, dt, z1);
            require_finite(p.signal[k + 1], "simulate_pair_exact[signal]", k + 1);
            if (k < m) {
                const double z2 = rng.normal();
                p.obs[k + 1] = p.obs[k] *
                               std::exp((g.r - 0.5 * g.nu * g.nu - 0.5 * g.delta * g.delta) * dt +
                                        g.nu * sq * z1 + g.delta * sq * z2);
                require_finite(p.obs[k + 1], "simulate_pair_exact[obs]", k + 1);
            }
        }
        return p;
    }

    if (model.kind == ModelKind::ou) {
        const auto& o = model.ou;
        for (std::size_t k = 0; k < n; ++k) {
            const double dt = grid.dt(k);
            const double decay = std::exp(-o.lambda * dt);
            const double sd = std::sqrt(ou_step_variance(o.lambda, dt));
            const double z1 = rng.normal();
            // The same stochastic integral of W drives both components.
            p.signal[k + 1] = o.theta + (p.signal[k] - o.theta) * decay + o.sigma * sd * z1;
            require_finite(p.signal[k + 1], "simulate_pair_exact[signal]", k + 1);
            if (k < m) {
                const double z2 = rng.normal();
                p.obs[k + 1] = o.theta + (p.obs[k] - o.theta) * decay + o.sigma * sd * z1 +
                               o.delta * sd * z2;
                require_finite(p.obs[k + 1], "simulate_pair_exact[obs]", k + 1);
            }
        }
        return p;
    }

    throw InvalidParameter("exact scheme is only available for the gbm and ou presets");
}

std::vector<double> simulate_signal_segment(const DiffusionModel& model, double x_start,
                                            std::size_t k_start, std::size_t k_end,
                                            const TimeGrid& grid, RngStream& rng) {
    if (!(k_start < k_end) || k_end > grid.end_index)
        throw InvalidParameter("simulate_signal_segment: need k_start < k_end <= n");
    std::vector<double> path(k_end - k_start + 1);
    path[0] = x_start;
    for (std::size_t k = k_start; k < k_end; ++k) {
        const double t = grid.times[k];
        const double dt = grid.dt(k);
        const double x = path[k - k_start];
        path[k - k_start + 1] = x + model.drift_signal(x, t) * dt +
                                model.vol_signal(x, t) * std::sqrt(dt) * rng.normal();
        require_finite(path[k - k_start + 1], "simulate_signal_segment", k + 1);
    }
    return path;
}

double exact_gbm_step(double x, double mu, double sigma, double dt, double z) {
    return x * std::exp((mu - 0.5 * sigma * sigma) * dt + sigma * std::sqrt(dt) * z);
}

double exact_ou_step(double x, double lambda, double theta, double sigma, double dt, double z) {
    const double decay = std::exp(-lambda * dt);
    return theta + (x - theta) * decay + sigma * std::sqrt(ou_step_variance(lambda, dt)) * z;
}

}  // namespace survfilter
