#include "survfilter/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "survfilter/bridge.hpp"
#include "survfilter/errors.hpp"
#include "survfilter/kernels.hpp"
#include "survfilter/parallel.hpp"
#include "survfilter/rng.hpp"
#include "survfilter/simulate.hpp"
#include "survfilter/survival.hpp"
#include "survfilter/time_grid.hpp"

namespace survfilter {

namespace {
constexpr std::uint64_t kPathTag = 0x70617468;
constexpr std::uint64_t kInnerTag = 0x696e6e72;
}  // namespace

OracleResult particle_conditional_survival(const DiffusionModel& model,
                                           std::span<const double> obs, double t_obs,
                                           double barrier, std::span<const double> horizons,
                                           const OracleConfig& config) {
    if (obs.size() < 2) throw ShapeError("particle oracle: need at least one observation step");
    if (config.particles == 0) throw InvalidParameter("particle oracle: particles >= 1");
    if (config.kernel == KernelChoice::lognormal && model.kind != ModelKind::gbm)
        throw InvalidParameter("lognormal kernel requires the gbm preset");
    if ((config.exact_paths || config.closed_form_fbar) && model.kind == ModelKind::custom)
        throw InvalidParameter("exact paths / closed-form survival need a preset model");

    const std::size_t m = obs.size() - 1;
    const TimeGrid grid = TimeGrid::observation(t_obs, m);
    const std::size_t P = config.particles;
    const std::size_t H = horizons.size();

    std::vector<double> log_like(P), no_cross(P), terminal(P);
    std::vector<double> fbar(P * H);

    parallel_for(P, config.threads, [&](std::size_t p) {
        RngStream rs = RngStream::derive(config.seed, kPathTag, p);

        // Prior signal path over the observation segment.
        std::vector<double> x(m + 1);
        x[0] = model.x0;
        for (std::size_t k = 0; k < m; ++k) {
            const double dt = grid.dt(k);
            const double z = rs.normal();
            if (config.exact_paths && model.kind == ModelKind::gbm)
                x[k + 1] = exact_gbm_step(x[k], model.gbm.mu, model.gbm.sigma, dt, z);
            else if (config.exact_paths && model.kind == ModelKind::ou)
                x[k + 1] = exact_ou_step(x[k], model.ou.lambda, model.ou.theta, model.ou.sigma,
                                         dt, z);
            else
                x[k + 1] = x[k] + model.drift_signal(x[k], grid.times[k]) * dt +
                           model.vol_signal(x[k], grid.times[k]) * std::sqrt(dt) * z;
            if (!std::isfinite(x[k + 1])) throw SimulationDiverged("particle oracle", k + 1);
        }
        terminal[p] = x[m];

        double ll = 0.0;
        double K = 1.0;
        for (std::size_t k = 0; k < m; ++k) {
            const double t = grid.times[k];
            const double dt = grid.dt(k);
            double g;
            if (config.kernel == KernelChoice::gaussian) {
                KernelParams kp{dt,
                                model.vol_signal(x[k], t),
                                model.drift_signal(x[k], t),
                                model.vol_obs_shared(obs[k], t),
                                model.vol_obs_idio(obs[k], t),
                                model.drift_obs(obs[k], x[k], t)};
                g = kernel_g(kp, x[k], obs[k], x[k + 1], obs[k + 1]);
            } else {
                const auto& gp = model.gbm;
                g = kernel_g_lognormal(
                    LognormalKernelParams{gp.mu, gp.sigma, gp.r, gp.nu, gp.delta, dt}, x[k],
                    obs[k], x[k + 1], obs[k + 1]);
            }
            ll += std::log(g);
            const double sig = model.vol_signal(x[k], t);
            K *= no_cross_factor(BridgeParams{x[k], x[k + 1], dt * sig * sig}, barrier);
        }
        log_like[p] = ll;
        no_cross[p] = K;

        for (std::size_t h = 0; h < H; ++h) {
            if (K == 0.0) {
                fbar[p * H + h] = 0.0;  // weightless in the numerator anyway
                continue;
            }
            if (config.closed_form_fbar && model.kind == ModelKind::gbm) {
                fbar[p * H + h] = gbm_survival_closed_form(x[m], model.gbm.mu, model.gbm.sigma,
                                                           barrier, horizons[h] - t_obs);
            } else {
                RngStream inner = RngStream::derive(config.seed, kInnerTag, p, h);
                fbar[p * H + h] = fbar_mc(model, x[m], t_obs, horizons[h], config.fbar_steps,
                                          config.inner_trials, barrier, inner)
                                      .value;
            }
        }
    });

    // Self-normalized ratio with log-sum-exp stabilization, reduced in
    // particle order.
    const double max_ll = *std::max_element(log_like.begin(), log_like.end());
    if (!std::isfinite(max_ll)) throw FilterDegenerate(m);
    double denom = 0.0, denom_sq = 0.0;
    for (std::size_t p = 0; p < P; ++p) {
        const double w = std::exp(log_like[p] - max_ll);
        log_like[p] = w;  // reuse as normalized weight
        denom += w;
        denom_sq += w * w;
    }
    if (!(denom > 0.0)) throw FilterDegenerate(m);

    OracleResult res;
    res.effective_sample_size = denom * denom / denom_sq;
    res.degenerate_weights = res.effective_sample_size < 10.0;
    res.probabilities.resize(H);
    for (std::size_t h = 0; h < H; ++h) {
        double num = 0.0;
        for (std::size_t p = 0; p < P; ++p)
            num += log_like[p] * no_cross[p] * fbar[p * H + h];
        res.probabilities[h] = std::min(1.0, std::max(0.0, num / denom));
    }
    if (config.keep_particle_values) {
        res.particle_weights.resize(P);
        res.particle_survival.resize(P * H);
        for (std::size_t p = 0; p < P; ++p) {
            res.particle_weights[p] = log_like[p] / denom;
            for (std::size_t h = 0; h < H; ++h)
                res.particle_survival[p * H + h] = no_cross[p] * fbar[p * H + h];
        }
    }
    return res;
}

}  // namespace survfilter
