#include "survfilter/survival.hpp"

#include <algorithm>
#include <cmath>

#include "survfilter/bridge.hpp"
#include "survfilter/errors.hpp"
#include "survfilter/math.hpp"
#include "survfilter/parallel.hpp"
#include "survfilter/simulate.hpp"

namespace survfilter {

namespace {

constexpr std::uint64_t kFbarStreamTag = 0x66626172;  // noise streams for fbar

inline double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

// One Euler segment from x over [t_obs, t_end] with the supplied standard
// normal draws; returns the product of no-crossing bridge factors.
double segment_survival(const DiffusionModel& model, double x, double t_obs, double dt,
                        std::size_t steps, std::span<const double> z, double barrier) {
    double cur = x;
    double prod = 1.0;
    const double sq = std::sqrt(dt);
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = t_obs + static_cast<double>(k) * dt;
        const double sig = model.vol_signal(cur, t);
        const double next = cur + model.drift_signal(cur, t) * dt + sig * sq * z[k];
        if (!std::isfinite(next)) throw SimulationDiverged("fbar_mc", k + 1);
        prod *= no_cross_factor(BridgeParams{cur, next, dt * sig * sig}, barrier);
        if (prod == 0.0) return 0.0;
        cur = next;
    }
    return prod;
}

}  // namespace

McEstimate fbar_mc(const DiffusionModel& model, double x, double t_obs, double t_end,
                   std::size_t steps, std::size_t trials, double barrier, RngStream& rng) {
    if (steps == 0 || trials == 0) throw InvalidParameter("fbar_mc: steps >= 1 and trials >= 1");
    if (x <= barrier) return {0.0, 0.0};
    if (t_end == t_obs) return {1.0, 0.0};
    if (!(t_end > t_obs)) throw InvalidParameter("fbar_mc: t_end must be >= t_obs");

    const double dt = (t_end - t_obs) / static_cast<double>(steps);
    std::vector<double> z(steps);
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t j = 0; j < trials; ++j) {
        for (auto& zi : z) zi = rng.normal();
        const double p = segment_survival(model, x, t_obs, dt, steps, z, barrier);
        sum += p;
        sum_sq += p * p;
    }
    const double n = static_cast<double>(trials);
    const double mean = sum / n;
    double se = 0.0;
    if (trials > 1) {
        const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
        se = std::sqrt(var / n);
    }
    return {clamp01(mean), se};
}

double gbm_survival_closed_form(double x, double mu, double sigma, double barrier, double u) {
    if (!(x > 0.0) || !(barrier > 0.0) || !(sigma > 0.0))
        throw InvalidParameter("gbm_survival_closed_form: x, barrier, sigma must be positive");
    if (x <= barrier) return 0.0;  // already hit
    if (!(u > 0.0)) return 1.0;
    const double nu_drift = mu - 0.5 * sigma * sigma;
    const double sq = sigma * std::sqrt(u);
    const double h1 = (std::log(x / barrier) + nu_drift * u) / sq;
    const double h2 = (std::log(barrier / x) + nu_drift * u) / sq;
    const double reflect = std::pow(barrier / x, 2.0 * nu_drift / (sigma * sigma));
    return clamp01(norm_cdf(h1) - reflect * norm_cdf(h2));
}

double conditional_survival(const FilterState& filter, std::span<const double> fbar_values) {
    if (fbar_values.size() != filter.posterior.size())
        throw ShapeError("conditional_survival: values must align with the posterior grid");
    double s = 0.0;
    for (std::size_t i = 0; i < fbar_values.size(); ++i)
        s += filter.posterior[i] * fbar_values[i];
    return clamp01(s);
}

SurvivalCurve survival_curve(const DiffusionModel& model, const MarginalQuantization& mq,
                             const FilterState& filter, double barrier,
                             std::span<const double> horizons, const CurveConfig& config) {
    const double t_obs = mq.time(mq.step_count());
    for (std::size_t h = 0; h < horizons.size(); ++h) {
        if (!(horizons[h] > t_obs))
            throw InvalidParameter("survival_curve: horizons must exceed the observation horizon");
        if (h > 0 && !(horizons[h] > horizons[h - 1]))
            throw InvalidParameter("survival_curve: horizons must be increasing");
    }

    const auto& xs = mq.signal_grid(mq.step_count());
    const std::size_t d = xs.size();
    const bool closed_form = model.kind == ModelKind::gbm && !config.force_mc;

    SurvivalCurve curve;
    curve.horizons.assign(horizons.begin(), horizons.end());
    curve.probabilities.resize(horizons.size());
    curve.std_errs.assign(horizons.size(), 0.0);
    curve.meta = SurvivalCurveMeta{config.seed,
                                   closed_form ? 0 : config.fbar_trials,
                                   d,
                                   mq.step_count(),
                                   config.fbar_steps,
                                   closed_form ? "closed-form" : "monte-carlo"};

    if (closed_form) {
        std::vector<double> fbar(d);
        for (std::size_t h = 0; h < horizons.size(); ++h) {
            const double u = horizons[h] - t_obs;
            for (std::size_t i = 0; i < d; ++i)
                fbar[i] =
                    gbm_survival_closed_form(xs[i], model.gbm.mu, model.gbm.sigma, barrier, u);
            curve.probabilities[h] = conditional_survival(filter, fbar);
        }
        return curve;
    }

    // Common random numbers: one noise table shared by every horizon and every
    // grid point.
    const std::size_t M = config.fbar_trials;
    const std::size_t steps = config.fbar_steps;
    if (M == 0 || steps == 0)
        throw InvalidParameter("survival_curve: fbar_trials and fbar_steps must be >= 1");
    std::vector<double> table(M * steps);
    parallel_for(M, config.threads, [&](std::size_t j) {
        RngStream rs = RngStream::derive(config.seed, kFbarStreamTag, j);
        for (std::size_t k = 0; k < steps; ++k) table[j * steps + k] = rs.normal();
    });

    std::vector<double> q(M);
    for (std::size_t h = 0; h < horizons.size(); ++h) {
        const double dt = (horizons[h] - t_obs) / static_cast<double>(steps);
        parallel_for(M, config.threads, [&](std::size_t j) {
            std::span<const double> z(table.data() + j * steps, steps);
            double qj = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                const double w = filter.posterior[i];
                if (w == 0.0 || xs[i] <= barrier) continue;
                qj += w * segment_survival(model, xs[i], t_obs, dt, steps, z, barrier);
            }
            q[j] = qj;
        });
        double sum = 0.0, sum_sq = 0.0;
        for (double qj : q) {
            sum += qj;
            sum_sq += qj * qj;
        }
        const double n = static_cast<double>(M);
        const double mean = sum / n;
        curve.probabilities[h] = clamp01(mean);
        if (M > 1)
            curve.std_errs[h] =
                std::sqrt(std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0)) / n);
    }
    return curve;
}

SurvivalCurve survival_curve(const DiffusionModel& model, std::span<const double> obs,
                             double t_obs, double barrier, std::span<const double> horizons,
                             const CurveConfig& config) {
    if (obs.size() < 2) throw ShapeError("survival_curve: need at least one observation step");
    const TimeGrid grid = TimeGrid::observation(t_obs, obs.size() - 1);
    const MarginalQuantization mq = build_marginal_quantization(model, grid, config.budget);
    const FilterState filter = filter_recursion(mq, obs, model, barrier, config.kernel);
    return survival_curve(model, mq, filter, barrier, horizons, config);
}

}  // namespace survfilter
