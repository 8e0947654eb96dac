#include "survfilter/marginal_quantization.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "survfilter/errors.hpp"
#include "survfilter/math.hpp"

namespace survfilter {

std::vector<std::vector<double>> quantized_diffusion_codebook(const DiffusionModel& model,
                                                              const BrownianCodebook& cb,
                                                              const TimeGrid& grid,
                                                              std::size_t substeps) {
    if (substeps == 0) throw InvalidParameter("quantized_diffusion_codebook: substeps >= 1");
    const std::size_t m = grid.obs_index;
    const std::size_t rows = cb.paths.size();
    std::vector<std::vector<double>> out(rows, std::vector<double>(m + 1, 0.0));

    for (std::size_t r = 0; r < rows; ++r) {
        double x = model.x0;
        out[r][0] = x;
        for (std::size_t k = 0; k < m; ++k) {
            const double h = grid.dt(k) / static_cast<double>(substeps);
            double t = grid.times[k];
            for (std::size_t s = 0; s < substeps; ++s) {
                auto rhs = [&](double xi, double ti) {
                    return model.drift_signal(xi, ti) -
                           0.5 * model.vol_signal(xi, ti) * model.vol_signal_deriv(xi, ti) +
                           model.vol_signal(xi, ti) * cb.deriv(r, ti);
                };
                const double k1 = rhs(x, t);
                const double k2 = rhs(x + 0.5 * h * k1, t + 0.5 * h);
                const double k3 = rhs(x + 0.5 * h * k2, t + 0.5 * h);
                const double k4 = rhs(x + h * k3, t + h);
                x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                t += h;
                if (!std::isfinite(x)) throw SimulationDiverged("quantized_diffusion_codebook", r);
            }
            out[r][k + 1] = x;
        }
    }
    return out;
}

MarginalQuantization::MarginalQuantization(std::vector<std::vector<double>> brownian,
                                           std::vector<std::vector<double>> signal,
                                           std::vector<std::vector<double>> weights,
                                           std::vector<double> times)
    : brownian_(std::move(brownian)),
      signal_(std::move(signal)),
      weights_(std::move(weights)),
      times_(std::move(times)) {
    transitions_.resize(times_.empty() ? 0 : times_.size() - 1);
}

void MarginalQuantization::transition_row(std::size_t k, std::size_t i,
                                          std::vector<double>& row) const {
    const auto& prev = brownian_[k - 1];
    const auto& cur = brownian_[k];
    const double sd = std::sqrt(dt(k));
    const std::size_t d = cur.size();
    row.resize(d);
    // Telescoping CDF differences over the midpoint cell edges; the two open
    // edges make each row sum to exactly 1.
    double cdf_prev = 0.0;
    for (std::size_t j = 0; j + 1 < d; ++j) {
        const double edge = 0.5 * (cur[j] + cur[j + 1]);
        const double cdf = norm_cdf((edge - prev[i]) / sd);
        row[j] = cdf - cdf_prev;
        cdf_prev = cdf;
    }
    row[d - 1] = 1.0 - cdf_prev;
}

const std::vector<double>& MarginalQuantization::transition(std::size_t k) const {
    if (k == 0 || k >= times_.size())
        throw InvalidParameter("transition index must be in [1, m]");
    auto& cached = transitions_[k - 1];
    if (!cached.empty()) return cached;

    const std::size_t rows = brownian_[k - 1].size();
    const std::size_t cols = brownian_[k].size();
    cached.resize(rows * cols);
    std::vector<double> row;
    for (std::size_t i = 0; i < rows; ++i) {
        transition_row(k, i, row);
        std::copy(row.begin(), row.end(), cached.begin() + static_cast<std::ptrdiff_t>(i * cols));
    }
    return cached;
}

MarginalQuantization marginal_quantization(const BrownianCodebook& cb,
                                           const std::vector<std::vector<double>>& signal_paths,
                                           const TimeGrid& grid, const DiffusionModel& model) {
    const std::size_t rows = cb.paths.size();
    if (signal_paths.size() != rows)
        throw ShapeError("marginal_quantization: signal paths do not match the codebook");
    const std::size_t m = grid.obs_index;

    std::vector<std::vector<double>> brownian(m + 1), signal(m + 1), weights(m + 1);
    brownian[0] = {0.0};
    signal[0] = {model.x0};
    weights[0] = {1.0};

    std::vector<std::size_t> perm(rows);
    for (std::size_t k = 1; k <= m; ++k) {
        std::vector<double> chi(rows);
        for (std::size_t r = 0; r < rows; ++r) {
            // Deterministic tie-break: shift equal marginal values apart by a
            // path-index-scaled epsilon before sorting.
            chi[r] = cb.paths[r][k] + static_cast<double>(r) * 1e-12;
        }
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::sort(perm.begin(), perm.end(),
                  [&](std::size_t a, std::size_t b) { return chi[a] < chi[b]; });

        brownian[k].resize(rows);
        signal[k].resize(rows);
        weights[k].resize(rows);
        for (std::size_t j = 0; j < rows; ++j) {
            brownian[k][j] = chi[perm[j]];
            signal[k][j] = signal_paths[perm[j]][k];
            weights[k][j] = cb.weights[perm[j]];
        }
        for (std::size_t j = 0; j + 1 < rows; ++j)
            if (!(brownian[k][j] < brownian[k][j + 1]))
                throw DegenerateGrid("duplicate Brownian marginal at step " + std::to_string(k));
    }

    std::vector<double> times(grid.times.begin(), grid.times.begin() + static_cast<long>(m + 1));
    return MarginalQuantization(std::move(brownian), std::move(signal), std::move(weights),
                                std::move(times));
}

MarginalQuantization build_marginal_quantization(const DiffusionModel& model,
                                                 const TimeGrid& grid, std::size_t budget,
                                                 std::size_t ode_substeps) {
    const ProductQuantizer pq = ProductQuantizer::build(budget, grid.obs_horizon());
    const BrownianCodebook cb = brownian_codebook(pq, grid);
    const auto signal_paths = quantized_diffusion_codebook(model, cb, grid, ode_substeps);
    return marginal_quantization(cb, signal_paths, grid, model);
}

namespace {
constexpr int kCacheVersion = 1;
}

bool save_quantization_cache(const std::string& path, const std::string& key,
                             const MarginalQuantization& mq) {
    nlohmann::json j;
    j["version"] = kCacheVersion;
    j["key"] = key;
    const std::size_t m = mq.step_count();
    std::vector<double> times;
    for (std::size_t k = 0; k <= m; ++k) times.push_back(mq.time(k));
    j["times"] = times;
    auto dump = [&](const char* name, auto getter) {
        nlohmann::json arr = nlohmann::json::array();
        for (std::size_t k = 0; k <= m; ++k) arr.push_back((mq.*getter)(k));
        j[name] = std::move(arr);
    };
    dump("brownian", &MarginalQuantization::brownian_grid);
    dump("signal", &MarginalQuantization::signal_grid);
    dump("weights", &MarginalQuantization::weights);

    std::ofstream out(path);
    if (!out) return false;
    out << j.dump();
    return static_cast<bool>(out);
}

bool load_quantization_cache(const std::string& path, const std::string& key,
                             MarginalQuantization& out) {
    std::ifstream in(path);
    if (!in) return false;
    nlohmann::json j;
    try {
        in >> j;
        if (j.at("version").get<int>() != kCacheVersion) return false;
        if (j.at("key").get<std::string>() != key) return false;
        auto times = j.at("times").get<std::vector<double>>();
        auto brownian = j.at("brownian").get<std::vector<std::vector<double>>>();
        auto signal = j.at("signal").get<std::vector<std::vector<double>>>();
        auto weights = j.at("weights").get<std::vector<std::vector<double>>>();
        out = MarginalQuantization(std::move(brownian), std::move(signal), std::move(weights),
                                   std::move(times));
        return true;
    } catch (const nlohmann::json::exception&) {
        return false;
    }
}

}  // namespace survfilter
