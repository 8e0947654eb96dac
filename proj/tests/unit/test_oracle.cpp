#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "survfilter/bridge.hpp"
#include "survfilter/diffusion_model.hpp"
#include "survfilter/oracle.hpp"
#include "survfilter/rng.hpp"
#include "survfilter/simulate.hpp"
#include "survfilter/time_grid.hpp"

using namespace survfilter;

namespace {

std::vector<double> simulated_obs(const DiffusionModel& model, double t_obs, std::size_t m,
                                  std::uint64_t seed) {
    const auto grid = TimeGrid::observation(t_obs, m);
    RngStream rng(seed);
    return simulate_pair(model, grid, rng).obs;
}

}  // namespace

TEST_CASE("without a barrier and with an instant horizon the ratio is one") {
    const auto model = DiffusionModel::ou_preset(0.18, 0.35, 0.12, 0.16, 0.35, 0.35);
    const auto obs = simulated_obs(model, 1.0, 5, 51);

    OracleConfig oc;
    oc.particles = 2000;
    oc.inner_trials = 1;
    oc.fbar_steps = 1;
    oc.seed = 52;
    oc.threads = 1;
    const std::vector<double> horizons{1.0 + 1e-12};
    const auto res = particle_conditional_survival(model, obs, 1.0, -1e12, horizons, oc);
    CHECK(res.probabilities[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(!res.degenerate_weights);
}

TEST_CASE("uninformative observations recover the unconditional survival") {
    // delta huge: weights are flat, so the estimate must match a plain
    // Monte Carlo of P(tau > t_n) built on the same two-segment grid.
    const auto model = DiffusionModel::ou_preset(0.18, 0.35, 0.12, 120.0, 0.35, 0.35);
    const double barrier = 0.2, t_obs = 1.0, t_end = 3.0;
    const std::size_t m = 5, steps = 25;
    const auto obs = simulated_obs(model, t_obs, m, 53);

    OracleConfig oc;
    oc.particles = 30000;
    oc.inner_trials = 16;
    oc.fbar_steps = steps;
    oc.seed = 54;
    oc.threads = 1;
    const std::vector<double> horizons{t_end};
    const auto res = particle_conditional_survival(model, obs, t_obs, barrier, horizons, oc);

    const auto grid = TimeGrid::two_segment(t_obs, m, t_end, steps);
    std::vector<double> vols(grid.end_index), dts(grid.end_index);
    double sum = 0.0, sum_sq = 0.0;
    const std::size_t trials = 30000;
    for (std::size_t j = 0; j < trials; ++j) {
        RngStream rng = RngStream::derive(55, j);
        const auto path = simulate_signal_segment(model, model.x0, 0, grid.end_index, grid, rng);
        for (std::size_t k = 0; k < grid.end_index; ++k) {
            vols[k] = model.vol_signal(path[k], grid.times[k]);
            dts[k] = grid.dt(k);
        }
        const double p = interval_survival_product(path, vols, dts, barrier);
        sum += p;
        sum_sq += p * p;
    }
    const double n = static_cast<double>(trials);
    const double mean = sum / n;
    const double se = std::sqrt(std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0)) / n);
    CHECK(std::abs(res.probabilities[0] - mean) <= 3.0 * se + 0.02);
}

TEST_CASE("informative observations are flagged when weights collapse") {
    const auto clean = DiffusionModel::ou_preset(0.18, 0.35, 0.12, 0.05, 0.35, 0.35);
    // Observations simulated under a much larger idiosyncratic noise level,
    // then weighted assuming nearly-noise-free ones: almost every particle is
    // incompatible, so a handful carry all the weight.
    const auto wild = DiffusionModel::ou_preset(0.18, 0.35, 0.12, 0.3, 0.35, 0.35);
    const auto obs = simulated_obs(wild, 1.0, 10, 56);

    OracleConfig oc;
    oc.particles = 3000;
    oc.inner_trials = 1;
    oc.fbar_steps = 1;
    oc.seed = 57;
    oc.threads = 1;
    const std::vector<double> horizons{1.5};
    const auto res = particle_conditional_survival(clean, obs, 1.0, 0.2, horizons, oc);
    CHECK(res.degenerate_weights);
    CHECK(res.effective_sample_size < 10.0);
}

TEST_CASE("bootstrap interval shrinks like one over root particles") {
    const auto model = DiffusionModel::ou_preset(0.18, 0.35, 0.12, 0.16, 0.35, 0.35);
    const auto obs = simulated_obs(model, 1.0, 5, 58);
    const std::vector<double> horizons{2.5};

    // Resample particle indices with replacement and recompute the
    // self-normalized ratio.
    auto bootstrap_halfwidth = [&](std::size_t particles, std::uint64_t seed) {
        OracleConfig oc;
        oc.particles = particles;
        oc.inner_trials = 8;
        oc.fbar_steps = 10;
        oc.keep_particle_values = true;
        oc.seed = seed;
        oc.threads = 1;
        const auto res = particle_conditional_survival(model, obs, 1.0, 0.2, horizons, oc);

        std::mt19937_64 gen(seed + 99);
        std::uniform_int_distribution<std::size_t> pick(0, particles - 1);
        const int B = 500;
        std::vector<double> estimates(B);
        for (int b = 0; b < B; ++b) {
            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < particles; ++i) {
                const std::size_t p = pick(gen);
                num += res.particle_weights[p] * res.particle_survival[p];
                den += res.particle_weights[p];
            }
            estimates[b] = num / den;
        }
        double mean = 0.0;
        for (double e : estimates) mean += e;
        mean /= B;
        double var = 0.0;
        for (double e : estimates) var += (e - mean) * (e - mean);
        var /= (B - 1);
        return 1.96 * std::sqrt(var);
    };

    const double hw1 = bootstrap_halfwidth(4000, 60);
    const double hw2 = bootstrap_halfwidth(8000, 61);
    CHECK(hw2 / hw1 > 0.7071 * 0.8);
    CHECK(hw2 / hw1 < 0.7071 * 1.2);
}
