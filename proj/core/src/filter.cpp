#include "survfilter/filter.hpp"

#include <algorithm>
#include <cmath>

#include "survfilter/bridge.hpp"
#include "survfilter/errors.hpp"
#include "survfilter/kernels.hpp"

namespace survfilter {

double FilterState::survival_to_obs_horizon() const {
    double s = 0.0;
    for (double p : posterior) s += p;
    return s;
}

FilterState filter_recursion(const MarginalQuantization& mq, std::span<const double> obs,
                             const DiffusionModel& model, double barrier, KernelChoice kernel) {
    const std::size_t m = mq.step_count();
    if (obs.size() != m + 1)
        throw ShapeError("filter_recursion: observations must match the grid (m+1 values)");
    if (kernel == KernelChoice::lognormal && model.kind != ModelKind::gbm)
        throw InvalidParameter("lognormal kernel requires the gbm preset");

    FilterState st;
    st.survival_weights = {1.0};
    st.likelihood_weights = {1.0};
    st.log_scale = 0.0;

    std::vector<double> row;
    for (std::size_t k = 1; k <= m; ++k) {
        const auto& x_prev = mq.signal_grid(k - 1);
        const auto& x_cur = mq.signal_grid(k);
        const std::size_t rows = x_prev.size();
        const std::size_t cols = x_cur.size();
        const double t_prev = mq.time(k - 1);
        const double dt = mq.dt(k);
        const double y_prev = obs[k - 1];
        const double y_cur = obs[k];

        std::vector<double> next_surv(cols, 0.0), next_like(cols, 0.0);

        for (std::size_t i = 0; i < rows; ++i) {
            const double wi_surv = st.survival_weights[i];
            const double wi_like = st.likelihood_weights[i];
            if (wi_surv == 0.0 && wi_like == 0.0) continue;

            const double xi = x_prev[i];
            mq.transition_row(k, i, row);

            KernelParams kp;
            LognormalKernelParams lp;
            if (kernel == KernelChoice::gaussian) {
                kp.dt = dt;
                kp.sigma = model.vol_signal(xi, t_prev);
                kp.b = model.drift_signal(xi, t_prev);
                kp.nu = model.vol_obs_shared(y_prev, t_prev);
                kp.delta = model.vol_obs_idio(y_prev, t_prev);
                kp.h = model.drift_obs(y_prev, xi, t_prev);
            } else {
                const auto& g = model.gbm;
                lp = LognormalKernelParams{g.mu, g.sigma, g.r, g.nu, g.delta, dt};
            }

            const double sig = model.vol_signal(xi, t_prev);
            const double bridge_var = dt * sig * sig;

            for (std::size_t j = 0; j < cols; ++j) {
                const double p = row[j];
                if (p == 0.0) continue;
                const double g = kernel == KernelChoice::gaussian
                                     ? kernel_g(kp, xi, y_prev, x_cur[j], y_cur)
                                     : kernel_g_lognormal(lp, xi, y_prev, x_cur[j], y_cur);
                const double gp = g * p;
                next_like[j] += gp * wi_like;
                if (wi_surv != 0.0) {
                    const double G =
                        no_cross_factor(BridgeParams{xi, x_cur[j], bridge_var}, barrier);
                    next_surv[j] += gp * G * wi_surv;
                }
            }
        }

        const double scale = *std::max_element(next_like.begin(), next_like.end());
        if (!(scale > 0.0)) throw FilterDegenerate(k);
        const double inv = 1.0 / scale;
        for (std::size_t j = 0; j < cols; ++j) {
            next_surv[j] *= inv;
            next_like[j] *= inv;
        }
        st.log_scale += std::log(scale);
        st.survival_weights = std::move(next_surv);
        st.likelihood_weights = std::move(next_like);
    }

    double denom = 0.0;
    for (double w : st.likelihood_weights) denom += w;
    if (!(denom > 0.0)) throw FilterDegenerate(m);
    st.posterior.resize(st.survival_weights.size());
    for (std::size_t i = 0; i < st.posterior.size(); ++i)
        st.posterior[i] = st.survival_weights[i] / denom;
    return st;
}

}  // namespace survfilter
