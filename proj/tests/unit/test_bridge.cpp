#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "survfilter/bridge.hpp"
#include "survfilter/errors.hpp"
#include "survfilter/math.hpp"
#include "survfilter/rng.hpp"

using namespace survfilter;

TEST_CASE("bridge_min_cdf boundary values") {
    const BridgeParams p{1.0, 2.0, 0.5};
    CHECK(bridge_min_cdf(p, 1.0) == doctest::Approx(1.0));  // one factor vanishes
    CHECK(bridge_min_cdf(p, 1.5) == 1.0);                   // above the minimum endpoint
    CHECK(bridge_min_cdf(BridgeParams{1.0, 1.0, 2.0}, 0.0) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK_THROWS_AS(bridge_min_cdf(BridgeParams{1.0, 1.0, 0.0}, 0.0), InvalidParameter);
}

TEST_CASE("bridge_min_cdf is a nondecreasing map into [0,1]") {
    RngStream rng(41);
    for (int rep = 0; rep < 50; ++rep) {
        const BridgeParams p{rng.normal(), rng.normal(), 0.01 + rng.uniform01()};
        double prev = 0.0;
        for (int i = 0; i <= 200; ++i) {
            const double u = -5.0 + 10.0 * i / 200.0;
            const double h = bridge_min_cdf(p, u);
            CHECK(h >= prev - 1e-15);
            CHECK(h >= 0.0);
            CHECK(h <= 1.0);
            prev = h;
        }
    }
}

TEST_CASE("no_cross_factor endpoints and indicator") {
    CHECK(no_cross_factor(BridgeParams{76.0, 80.0, 1.0}, 76.0) == 0.0);  // endpoint on barrier
    CHECK(no_cross_factor(BridgeParams{80.0, 75.0, 1.0}, 76.0) == 0.0);  // right endpoint below

    // At the one-year gbm step variance the exponent is ~ -1.6e3: the factor
    // underflows to exactly 1, the documented limit.
    const double var = (1.0 / 50.0) * std::pow(0.03 * 86.3, 2.0);
    CHECK(no_cross_factor(BridgeParams{86.3, 86.3, var}, 76.0) == 1.0);

    const double g = no_cross_factor(BridgeParams{86.3, 86.3, 40.0}, 76.0);
    CHECK(g > 0.0);
    CHECK(g < 1.0);
}

TEST_CASE("no_cross_factor equals one minus the minimum cdf at the barrier") {
    RngStream rng(42);
    for (int rep = 0; rep < 200; ++rep) {
        const double a = rng.normal();
        const BridgeParams p{a + 3.0 * rng.uniform01(), a + 3.0 * rng.uniform01(),
                             0.01 + 2.0 * rng.uniform01()};
        CHECK(no_cross_factor(p, a) ==
              doctest::Approx(1.0 - bridge_min_cdf(p, a)).epsilon(1e-12));
    }
}

TEST_CASE("no_cross_factor limits in the bridge variance") {
    const BridgeParams tight{1.0, 1.2, 1e-12};
    CHECK(no_cross_factor(tight, 0.5) == doctest::Approx(1.0));
    const BridgeParams wide{1.0, 1.2, 1e12};
    CHECK(no_cross_factor(wide, 0.5) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("interval_survival_product") {
    const std::vector<double> vols{1.0, 1.0, 1.0};
    const std::vector<double> dts{0.1, 0.1, 0.1};

    // touching the barrier at a grid point kills the product
    const std::vector<double> touching{1.0, 0.5, 1.0, 1.2};
    CHECK(interval_survival_product(touching, vols, dts, 0.5) == 0.0);

    // a single interval reduces to its factor
    const std::vector<double> two{1.0, 1.2};
    const std::vector<double> v1{0.7}, d1{0.3};
    CHECK(interval_survival_product(two, v1, d1, 0.4) ==
          doctest::Approx(no_cross_factor(BridgeParams{1.0, 1.2, 0.3 * 0.49}, 0.4)));

    // fewer than two points is the empty product
    const std::vector<double> one{3.0};
    CHECK(interval_survival_product(one, {}, {}, 0.0) == 1.0);

    const std::vector<double> bad{1.0, 1.0, 1.0};
    CHECK_THROWS_AS(interval_survival_product(bad, v1, d1, 0.0), ShapeError);
}

TEST_CASE("sample_interval_min closed form and boundary") {
    CHECK(sample_interval_min(BridgeParams{1.0, 1.0, 2.0}, std::exp(-1.0)) ==
          doctest::Approx(0.0).epsilon(1e-12));
    // draws near 1 push the minimum to the lower endpoint
    CHECK(sample_interval_min(BridgeParams{1.0, 3.0, 0.5}, 1.0 - 1e-13) ==
          doctest::Approx(1.0).epsilon(1e-6));
    CHECK_THROWS_AS(sample_interval_min(BridgeParams{1.0, 1.0, 1.0}, 0.0), InvalidParameter);
    CHECK_THROWS_AS(sample_interval_min(BridgeParams{1.0, 1.0, 1.0}, 1.0), InvalidParameter);
}

TEST_CASE("sampler inverts the cdf and never exceeds the endpoint minimum") {
    RngStream rng(43);
    for (int rep = 0; rep < 100; ++rep) {
        const BridgeParams p{rng.normal(), rng.normal(), 0.05 + rng.uniform01()};
        const double lo = std::min(p.x_left, p.x_right);
        for (int i = 1; i < 40; ++i) {
            const double u = static_cast<double>(i) / 40.0;
            const double m = sample_interval_min(p, u);
            CHECK(m <= lo + 1e-12);
            const double back = bridge_min_cdf(p, m);
            CHECK(back == doctest::Approx(u).epsilon(1e-12));
        }
    }
}

TEST_CASE("swapping the endpoints changes nothing") {
    RngStream rng(44);
    for (int rep = 0; rep < 100; ++rep) {
        const BridgeParams p{rng.normal(), rng.normal(), 0.05 + rng.uniform01()};
        const BridgeParams q{p.x_right, p.x_left, p.var};
        const double u = p.x_left - 2.0 * rng.uniform01();
        CHECK(bridge_min_cdf(p, u) == doctest::Approx(bridge_min_cdf(q, u)).epsilon(1e-14));
        const double a = std::min(p.x_left, p.x_right) - rng.uniform01();
        CHECK(no_cross_factor(p, a) == doctest::Approx(no_cross_factor(q, a)).epsilon(1e-14));
        const double lam = rng.uniform01();
        CHECK(sample_interval_min(p, lam) ==
              doctest::Approx(sample_interval_min(q, lam)).epsilon(1e-14));
    }
}

TEST_CASE("sampled minima follow the closed-form law") {
    // Kolmogorov-Smirnov at the 1% level plus an analytic mean check for the
    // symmetric case, where x - min is Rayleigh-type with
    // E[x - min] = sqrt(pi var / 8).
    const std::size_t n = 100000;
    RngStream rng(45);

    const BridgeParams p{86.3, 84.0, 0.9};
    std::vector<double> mins(n);
    for (auto& m : mins) m = sample_interval_min(p, rng.uniform01());
    std::sort(mins.begin(), mins.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = bridge_min_cdf(p, mins[i]);
        const double hi = static_cast<double>(i + 1) / static_cast<double>(n);
        const double lo = static_cast<double>(i) / static_cast<double>(n);
        ks = std::max(ks, std::max(std::abs(f - hi), std::abs(f - lo)));
    }
    CHECK(ks < 1.628 / std::sqrt(static_cast<double>(n)));

    const BridgeParams sym{1.0, 1.0, 0.7};
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = 1.0 - sample_interval_min(sym, rng.uniform01());
        sum += r;
        sum_sq += r * r;
    }
    const double mean = sum / static_cast<double>(n);
    const double var = (sum_sq - static_cast<double>(n) * mean * mean) / static_cast<double>(n - 1);
    const double target = std::sqrt(kPi * sym.var / 8.0);
    CHECK(std::abs(mean - target) <= 3.0 * std::sqrt(var / static_cast<double>(n)));
}

TEST_CASE("no-crossing factor matches the frequency of sampled minima above the barrier") {
    const std::size_t n = 100000;
    RngStream rng(46);
    for (int rep = 0; rep < 5; ++rep) {
        const double a = rng.normal();
        const BridgeParams p{a + 0.2 + 2.0 * rng.uniform01(), a + 0.2 + 2.0 * rng.uniform01(),
                             0.1 + rng.uniform01()};
        std::size_t above = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (sample_interval_min(p, rng.uniform01()) > a) ++above;
        const double freq = static_cast<double>(above) / static_cast<double>(n);
        const double g = no_cross_factor(p, a);
        const double se = std::sqrt(std::max(g * (1.0 - g), 1e-12) / static_cast<double>(n));
        CHECK(std::abs(freq - g) <= 3.0 * se + 1e-3);
    }
}
