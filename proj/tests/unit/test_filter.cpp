#include <doctest.h>

#include <cmath>
#include <vector>

#include "survfilter/bridge.hpp"
#include "survfilter/diffusion_model.hpp"
#include "survfilter/errors.hpp"
#include "survfilter/filter.hpp"
#include "survfilter/kernels.hpp"
#include "survfilter/marginal_quantization.hpp"
#include "survfilter/math.hpp"
#include "survfilter/rng.hpp"
#include "survfilter/simulate.hpp"
#include "survfilter/survival.hpp"
#include "survfilter/time_grid.hpp"

using namespace survfilter;

namespace {

double bivariate_normal_pdf(double u, double v, double m1, double m2, double s11, double s12,
                            double s22) {
    const double det = s11 * s22 - s12 * s12;
    const double du = u - m1, dv = v - m2;
    const double q = (s22 * du * du - 2.0 * s12 * du * dv + s11 * dv * dv) / det;
    return std::exp(-0.5 * q) / (2.0 * kPi * std::sqrt(det));
}

double normal_pdf_mv(double u, double mean, double var) {
    const double d = u - mean;
    return std::exp(-0.5 * d * d / var) / std::sqrt(2.0 * kPi * var);
}

}  // namespace

TEST_CASE("kernel_g at matched standardized residuals hits its maximum value") {
    const KernelParams p{0.1, 0.3, 0.05, 0.2, 0.4, 0.01};
    const double m1 = 1.0 + 0.05 * 0.1;
    const double m2 = 2.0 + 0.01 * 0.1;
    const double t = 0.7;  // common standardized residual
    const double g = kernel_g(p, 1.0, 2.0, m1 + 0.3 * t, m2 + 0.2 * t);
    const double pref = 1.0 / (std::pow(2.0 * kPi * 0.1, 1.5) * 0.3 * 0.3 * 0.4);
    CHECK(g == doctest::Approx(pref).epsilon(1e-12));
    // and never exceeds it
    RngStream rng(11);
    for (int i = 0; i < 100; ++i)
        CHECK(kernel_g(p, 1.0, 2.0, m1 + rng.normal(), m2 + rng.normal()) <= pref * (1 + 1e-12));
}

TEST_CASE("kernel_g is the Euler pair density ratio up to the fixed per-step factor") {
    // f/P is the conditional density of y' given (x, y, x'); the kernel keeps
    // the verbatim normalization, which differs from it by 2 pi dt sigma^2.
    RngStream rng(12);
    for (int i = 0; i < 100; ++i) {
        const KernelParams p{0.05 + 0.2 * rng.uniform01(), 0.2 + rng.uniform01(),
                             rng.normal(), 0.1 + rng.uniform01(), 0.1 + rng.uniform01(),
                             rng.normal()};
        const double x = rng.normal(), y = rng.normal();
        const double m1 = x + p.b * p.dt, m2 = y + p.h * p.dt;
        const double xn = m1 + p.sigma * std::sqrt(p.dt) * rng.normal();
        const double yn = m2 + std::sqrt(p.dt * (p.nu * p.nu + p.delta * p.delta)) * rng.normal();

        const double f = bivariate_normal_pdf(xn, yn, m1, m2, p.dt * p.sigma * p.sigma,
                                              p.dt * p.sigma * p.nu,
                                              p.dt * (p.nu * p.nu + p.delta * p.delta));
        const double marginal = normal_pdf_mv(xn, m1, p.dt * p.sigma * p.sigma);
        const double ratio = f / marginal;
        const double g = kernel_g(p, x, y, xn, yn);
        CHECK(g * (2.0 * kPi * p.dt * p.sigma * p.sigma) ==
              doctest::Approx(ratio).epsilon(1e-10));
    }
}

TEST_CASE("kernel_g forgets the signal as the idiosyncratic noise grows") {
    KernelParams p{0.1, 0.3, 0.05, 0.2, 1e9, 0.01};
    const double g = kernel_g(p, 1.0, 2.0, 1.4, 1.1);
    const double pref = 1.0 / (std::pow(2.0 * kPi * 0.1, 1.5) * 0.3 * 0.3 * 1e9);
    CHECK(g == doctest::Approx(pref).epsilon(1e-9));
}

TEST_CASE("lognormal kernel: trivial maximum, density ratio, scaling") {
    const LognormalKernelParams p{0.03, 0.3, 0.03, 0.3, 0.2, 0.1};

    const double m1 = std::log(86.0) + (0.03 - 0.5 * 0.09) * 0.1;
    const double m2 = std::log(90.0) + (0.03 - 0.5 * 0.09 - 0.5 * 0.04) * 0.1;
    const double t = -0.4;
    const double xn = std::exp(m1 + 0.3 * t), yn = std::exp(m2 + 0.3 * t);
    const double pref = 1.0 / (std::pow(2.0 * kPi * 0.1, 1.5) * 0.09 * 0.2 * xn * xn * yn);
    CHECK(kernel_g_lognormal(p, 86.0, 90.0, xn, yn) == doctest::Approx(pref).epsilon(1e-12));

    RngStream rng(13);
    for (int i = 0; i < 100; ++i) {
        const double x = 50.0 + 50.0 * rng.uniform01(), y = 50.0 + 50.0 * rng.uniform01();
        const double lm1 = std::log(x) + (p.mu - 0.5 * p.sigma * p.sigma) * p.dt;
        const double lm2 =
            std::log(y) + (p.r - 0.5 * p.nu * p.nu - 0.5 * p.delta * p.delta) * p.dt;
        const double lxn = lm1 + p.sigma * std::sqrt(p.dt) * rng.normal();
        const double lyn = lm2 + std::sqrt(p.dt * (p.nu * p.nu + p.delta * p.delta)) * rng.normal();
        const double xn2 = std::exp(lxn), yn2 = std::exp(lyn);

        const double f = bivariate_normal_pdf(lxn, lyn, lm1, lm2, p.dt * p.sigma * p.sigma,
                                              p.dt * p.sigma * p.nu,
                                              p.dt * (p.nu * p.nu + p.delta * p.delta)) /
                         (xn2 * yn2);
        const double marginal = normal_pdf_mv(lxn, lm1, p.dt * p.sigma * p.sigma) / xn2;
        const double g = kernel_g_lognormal(p, x, y, xn2, yn2);
        CHECK(g * (2.0 * kPi * p.dt * p.sigma * p.sigma * xn2 * xn2) ==
              doctest::Approx(f / marginal).epsilon(1e-10));

        // scaling the x arguments only acts through the explicit x'^2 factor
        const double c = 1.0 + rng.uniform01();
        CHECK(kernel_g_lognormal(p, c * x, y, c * xn2, yn2) ==
              doctest::Approx(g / (c * c)).epsilon(1e-10));
    }

    CHECK_THROWS_AS(kernel_g_lognormal(p, -1.0, 1.0, 1.0, 1.0), InvalidParameter);
}

TEST_CASE("one step, one node: the posterior weight is the bridge factor") {
    const auto model = DiffusionModel::ou_preset(0.18, 0.35, 0.12, 0.16, 0.35, 0.35);
    const double dt = 0.1, x1 = 0.34, w1 = -0.05;
    MarginalQuantization mq({{0.0}, {w1}}, {{0.35}, {x1}}, {{1.0}, {1.0}}, {0.0, dt});
    const std::vector<double> obs{0.35, 0.36};

    const auto st = filter_recursion(mq, obs, model, 0.2, KernelChoice::gaussian);
    REQUIRE(st.posterior.size() == 1);
    const double var = dt * 0.12 * 0.12;
    const double G = no_cross_factor(BridgeParams{0.35, x1, var}, 0.2);
    CHECK(st.posterior[0] == doctest::Approx(G).epsilon(1e-12));
}

TEST_CASE("without a barrier the posterior mass is exactly one") {
    const auto model = DiffusionModel::ou_preset(0.18, 0.35, 0.12, 0.16, 0.35, 0.35);
    const auto grid = TimeGrid::observation(1.0, 8);
    const auto mq = build_marginal_quantization(model, grid, 50);
    RngStream rng(21);
    const auto pair = simulate_pair(model, grid, rng);

    const auto st = filter_recursion(mq, pair.obs, model, -1e12, KernelChoice::gaussian);
    for (std::size_t i = 0; i < st.posterior.size(); ++i)
        CHECK(st.survival_weights[i] == st.likelihood_weights[i]);
    CHECK(st.survival_to_obs_horizon() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("filter recursion matches an unscaled hand-rolled chain") {
    const auto model = DiffusionModel::ou_preset(0.18, 0.35, 0.12, 0.16, 0.35, 0.35);
    const auto grid = TimeGrid::observation(0.6, 3);
    const auto mq = build_marginal_quantization(model, grid, 10);
    RngStream rng(22);
    const auto pair = simulate_pair(model, grid, rng);
    const double barrier = 0.2;

    // chain without any rescaling, direct sums
    std::vector<double> pi{1.0}, varpi{1.0};
    for (std::size_t k = 1; k <= mq.step_count(); ++k) {
        const auto& xp = mq.signal_grid(k - 1);
        const auto& xc = mq.signal_grid(k);
        const auto& tr = mq.transition(k);
        const double dt = mq.dt(k), tprev = mq.time(k - 1);
        std::vector<double> npi(xc.size(), 0.0), nvarpi(xc.size(), 0.0);
        for (std::size_t i = 0; i < xp.size(); ++i) {
            KernelParams kp{dt,
                            model.vol_signal(xp[i], tprev),
                            model.drift_signal(xp[i], tprev),
                            model.vol_obs_shared(pair.obs[k - 1], tprev),
                            model.vol_obs_idio(pair.obs[k - 1], tprev),
                            model.drift_obs(pair.obs[k - 1], xp[i], tprev)};
            for (std::size_t j = 0; j < xc.size(); ++j) {
                const double g = kernel_g(kp, xp[i], pair.obs[k - 1], xc[j], pair.obs[k]);
                const double G = no_cross_factor(
                    BridgeParams{xp[i], xc[j], dt * kp.sigma * kp.sigma}, barrier);
                npi[j] += g * G * tr[i * xc.size() + j] * pi[i];
                nvarpi[j] += g * tr[i * xc.size() + j] * varpi[i];
            }
        }
        pi = std::move(npi);
        varpi = std::move(nvarpi);
    }
    double denom = 0.0;
    for (double w : varpi) denom += w;

    const auto st = filter_recursion(mq, pair.obs, model, barrier, KernelChoice::gaussian);
    REQUIRE(st.posterior.size() == pi.size());
    for (std::size_t i = 0; i < pi.size(); ++i)
        CHECK(st.posterior[i] == doctest::Approx(pi[i] / denom).epsilon(1e-12));
}

TEST_CASE("posterior mass is monotone in the barrier") {
    const auto model = DiffusionModel::ou_preset(0.18, 0.35, 0.12, 0.16, 0.35, 0.35);
    const auto grid = TimeGrid::observation(1.0, 10);
    const auto mq = build_marginal_quantization(model, grid, 100);
    RngStream rng(23);
    const auto pair = simulate_pair(model, grid, rng);

    double prev = 2.0;
    for (double barrier : {0.1, 0.2, 0.25, 0.3}) {
        const auto st = filter_recursion(mq, pair.obs, model, barrier, KernelChoice::gaussian);
        const double mass = st.survival_to_obs_horizon();
        CHECK(mass < prev);
        CHECK(mass >= 0.0);
        CHECK(mass <= 1.0);
        prev = mass;
    }
}

TEST_CASE("uninformative observations reduce to the prior survival") {
    // delta = 1000 sigma: the posterior collapses onto prior weights times the
    // no-crossing products, so the retained mass matches a plain Monte Carlo
    // estimate of the survival to the observation horizon.
    const auto model = DiffusionModel::ou_preset(0.18, 0.35, 0.12, 120.0, 0.35, 0.35);
    const auto grid = TimeGrid::observation(1.0, 10);
    const auto mq = build_marginal_quantization(model, grid, 500);
    RngStream rng(24);
    const auto pair = simulate_pair(model, grid, rng);
    const double barrier = 0.2;

    const auto st = filter_recursion(mq, pair.obs, model, barrier, KernelChoice::gaussian);

    RngStream mc_rng(25);
    const auto plain = fbar_mc(model, 0.35, 0.0, 1.0, 10, 40000, barrier, mc_rng);
    CHECK(std::abs(st.survival_to_obs_horizon() - plain.value) <= 0.05);
}

TEST_CASE("filter input validation") {
    const auto model = DiffusionModel::ou_preset(0.18, 0.35, 0.12, 0.16, 0.35, 0.35);
    const auto grid = TimeGrid::observation(1.0, 4);
    const auto mq = build_marginal_quantization(model, grid, 10);
    const std::vector<double> short_obs{0.35, 0.36};
    CHECK_THROWS_AS(filter_recursion(mq, short_obs, model, 0.2, KernelChoice::gaussian),
                    ShapeError);
    const std::vector<double> obs(5, 0.35);
    CHECK_THROWS_AS(filter_recursion(mq, obs, model, 0.2, KernelChoice::lognormal),
                    InvalidParameter);
}

TEST_CASE("all-underflow likelihood reports the failing step") {
    const auto model = DiffusionModel::ou_preset(0.18, 0.35, 0.12, 1e-9, 0.35, 0.35);
    const auto grid = TimeGrid::observation(1.0, 3);
    const auto mq = build_marginal_quantization(model, grid, 10);
    const std::vector<double> obs{0.35, 1e6, 1e6, 1e6};  // impossible jump
    CHECK_THROWS_AS(filter_recursion(mq, obs, model, 0.2, KernelChoice::gaussian),
                    FilterDegenerate);
}
