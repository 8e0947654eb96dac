#include "survfilter/product_quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "survfilter/errors.hpp"
#include "survfilter/math.hpp"

namespace survfilter {

double kl_eigenvalue(std::size_t n, double horizon) {
    if (n == 0 || !(horizon > 0.0)) throw InvalidParameter("kl_eigenvalue: need n >= 1, T > 0");
    const double denom = kPi * (static_cast<double>(n) - 0.5);
    return (horizon / denom) * (horizon / denom);
}

double kl_basis(std::size_t n, double horizon, double t) {
    if (n == 0 || !(horizon > 0.0)) throw InvalidParameter("kl_basis: need n >= 1, T > 0");
    const double omega = kPi * (static_cast<double>(n) - 0.5) / horizon;
    return std::sqrt(2.0 / horizon) * std::sin(omega * t);
}

double kl_basis_deriv(std::size_t n, double horizon, double t) {
    if (n == 0 || !(horizon > 0.0)) throw InvalidParameter("kl_basis_deriv: need n >= 1, T > 0");
    const double omega = kPi * (static_cast<double>(n) - 0.5) / horizon;
    return std::sqrt(2.0 / horizon) * omega * std::cos(omega * t);
}

namespace {

// Lazily extended exact distortion table for N(0,1) quantizers.
class DistortionTable {
public:
    double operator()(std::size_t n) {
        while (table_.size() <= n) {
            const std::size_t k = table_.size();
            table_.push_back(k == 0 ? std::numeric_limits<double>::infinity()
                                    : optimal_gaussian_quantizer(k).distortion());
        }
        return table_[n];
    }

private:
    std::vector<double> table_;
};

struct AllocationSearch {
    double horizon;
    std::size_t budget;
    DistortionTable& dist;
    std::vector<double> lambda;  // 1-based values cached as lambda[n-1]
    double total_lambda;         // sum over all n: T^2 / 2

    double eigen(std::size_t n) {
        while (lambda.size() < n) lambda.push_back(kl_eigenvalue(lambda.size() + 1, horizon));
        return lambda[n - 1];
    }

    // Remaining error when coordinates >= n stay unquantized.
    double tail(std::size_t n) {
        double used = 0.0;
        for (std::size_t j = 1; j < n; ++j) used += eigen(j);
        return total_lambda - used;
    }

    double best_value = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> best_sizes;
    std::vector<std::size_t> current;

    // Enumerates non-increasing tuples of sizes >= 2. The stop option is
    // evaluated before extending, so ties resolve toward fewer coordinates.
    void dfs(std::size_t coord, std::size_t max_size, std::size_t remaining_budget, double acc) {
        const double stop_value = acc + tail(coord);
        if (stop_value < best_value) {
            best_value = stop_value;
            best_sizes = current;
        }
        // A further coordinate of size K >= 2 lowers the error only if
        // lambda_coord (D(K) - 1) + ... can beat the tail; prune on the ideal
        // completion where every remaining coordinate quantizes for free.
        if (acc + tail_after_free(coord, remaining_budget) >= best_value) return;
        const std::size_t cap = std::min(max_size, remaining_budget);
        for (std::size_t k = 2; k <= cap; ++k) {
            current.push_back(k);
            dfs(coord + 1, k, remaining_budget / k, acc + eigen(coord) * dist(k));
            current.pop_back();
        }
    }

    // Lower bound: coordinates coord..coord+extra-1 get distortion 0 (extra
    // limited by the budget), everything later keeps its eigenvalue.
    double tail_after_free(std::size_t coord, std::size_t remaining_budget) {
        std::size_t extra = 0;
        std::size_t b = remaining_budget;
        while (b >= 2) {
            ++extra;
            b /= 2;
        }
        return tail(coord + extra);
    }
};

}  // namespace

double allocation_distortion(const std::vector<std::size_t>& sizes, double horizon) {
    if (!(horizon > 0.0)) throw InvalidParameter("allocation_distortion: T > 0 required");
    DistortionTable dist;
    double value = horizon * horizon / 2.0;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] == 0) throw InvalidParameter("allocation sizes must be >= 1");
        value += kl_eigenvalue(i + 1, horizon) * (dist(sizes[i]) - 1.0);
    }
    return value;
}

std::vector<std::size_t> allocate_sizes(std::size_t budget, double horizon) {
    if (budget == 0 || !(horizon > 0.0))
        throw InvalidParameter("allocate_sizes: need budget >= 1 and T > 0");

    DistortionTable dist;
    // Sizes above this cap are examined through the exclusion bound below, so
    // the distortion table stays small.
    std::size_t cap = std::min<std::size_t>(budget, 1024);

    while (true) {
        AllocationSearch search{horizon, budget, dist, {}, horizon * horizon / 2.0,
                                std::numeric_limits<double>::infinity(), {}, {}};
        search.dfs(1, cap, budget, 0.0);

        if (cap >= budget) return search.best_sizes;

        // Any tuple with a coordinate above the cap has first coordinate
        // above the cap (non-increasing order); bound it by the exact best
        // completion of the remaining coordinates.
        AllocationSearch rest{horizon, budget, dist, {}, horizon * horizon / 2.0,
                              std::numeric_limits<double>::infinity(), {}, {}};
        const std::size_t rest_budget = budget / (cap + 1);
        rest.dfs(2, std::min(rest_budget, cap), rest_budget, 0.0);
        // Such a tuple is worth at least lambda_1 * 0 plus its coord>=2 completion.
        if (rest.best_value >= search.best_value) return search.best_sizes;
        cap = std::min(budget, cap * 4);
    }
}

ProductQuantizer ProductQuantizer::build(std::size_t budget, double horizon) {
    ProductQuantizer pq;
    pq.horizon = horizon;
    pq.sizes = allocate_sizes(budget, horizon);
    pq.coords.reserve(pq.sizes.size());
    pq.eigenvalues.reserve(pq.sizes.size());
    for (std::size_t i = 0; i < pq.sizes.size(); ++i) {
        pq.coords.push_back(optimal_gaussian_quantizer(pq.sizes[i]));
        pq.eigenvalues.push_back(kl_eigenvalue(i + 1, horizon));
    }
    return pq;
}

std::size_t ProductQuantizer::path_count() const {
    std::size_t n = 1;
    for (std::size_t s : sizes) n *= s;
    return n;
}

double BrownianCodebook::value(std::size_t row, double t) const {
    double v = 0.0;
    for (std::size_t n = 0; n < coeffs[row].size(); ++n)
        v += coeffs[row][n] * kl_basis(n + 1, horizon, t);
    return v;
}

double BrownianCodebook::deriv(std::size_t row, double t) const {
    double v = 0.0;
    for (std::size_t n = 0; n < coeffs[row].size(); ++n)
        v += coeffs[row][n] * kl_basis_deriv(n + 1, horizon, t);
    return v;
}

BrownianCodebook brownian_codebook(const ProductQuantizer& pq, const TimeGrid& grid) {
    const double horizon = grid.obs_horizon();
    if (std::abs(horizon - pq.horizon) > 1e-12 * (1.0 + std::abs(horizon)))
        throw InvalidParameter("brownian_codebook: quantizer horizon does not match the grid");

    const std::size_t d = pq.sizes.size();
    const std::size_t rows = pq.path_count();
    const std::size_t m = grid.obs_index;

    BrownianCodebook cb;
    cb.horizon = pq.horizon;
    cb.paths.assign(rows, std::vector<double>(m + 1, 0.0));
    cb.weights.assign(rows, 1.0);
    cb.coeffs.assign(rows, std::vector<double>(d, 0.0));

    std::vector<std::size_t> idx(d, 0);
    std::vector<double> sqrt_lambda(d);
    for (std::size_t n = 0; n < d; ++n) sqrt_lambda[n] = std::sqrt(pq.eigenvalues[n]);

    for (std::size_t r = 0; r < rows; ++r) {
        double w = 1.0;
        for (std::size_t n = 0; n < d; ++n) {
            cb.coeffs[r][n] = sqrt_lambda[n] * pq.coords[n].levels[idx[n]];
            w *= pq.coords[n].weights[idx[n]];
        }
        cb.weights[r] = w;
        for (std::size_t k = 0; k <= m; ++k) cb.paths[r][k] = cb.value(r, grid.times[k]);
        // advance the multi-index, last coordinate fastest
        for (std::size_t n = d; n-- > 0;) {
            if (++idx[n] < pq.sizes[n]) break;
            idx[n] = 0;
        }
    }
    return cb;
}

}  // namespace survfilter
