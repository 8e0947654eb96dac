#include "survfilter/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "survfilter/errors.hpp"
#include "survfilter/marginal_quantization.hpp"
#include "survfilter/oracle.hpp"
#include "survfilter/simulate.hpp"
#include "survfilter/survival.hpp"

namespace survfilter {

namespace {

constexpr std::uint64_t kObsTag = 0x6f627374;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// The quantization depends on the signal dynamics only, so the cache key
// excludes every observation-side parameter.
std::string quantization_key(const RunConfig& c) {
    std::ostringstream os;
    os << c.model;
    if (c.model == "gbm")
        os << "|mu=" << fmt(c.mu) << "|sigma=" << fmt(c.sigma);
    else
        os << "|lambda=" << fmt(c.lambda) << "|theta=" << fmt(c.theta) << "|sigma=" << fmt(c.sigma);
    os << "|x0=" << fmt(c.x0) << "|t_obs=" << fmt(c.t_obs) << "|m=" << c.obs_steps
       << "|budget=" << c.budget;
    return os.str();
}

nlohmann::ordered_json config_json(const RunConfig& c) {
    nlohmann::ordered_json j;
    j["preset"] = c.preset;
    j["model"] = c.model;
    if (c.model == "gbm") {
        j["mu"] = c.mu;
        j["sigma"] = c.sigma;
    } else {
        j["lambda"] = c.lambda;
        j["theta"] = c.theta;
        j["sigma"] = c.sigma;
    }
    j["delta"] = c.delta;
    j["x0"] = c.x0;
    j["y0"] = c.y0;
    j["barrier"] = c.barrier;
    j["t_obs"] = c.t_obs;
    j["obs_steps"] = c.obs_steps;
    j["horizons"] = c.horizons;
    j["budget"] = c.budget;
    j["fbar_steps"] = c.fbar_steps;
    j["fbar_trials"] = c.fbar_trials;
    j["kernel"] = c.kernel == KernelChoice::gaussian ? "gaussian" : "lognormal";
    j["seed"] = c.seed;
    j["obs"] = c.obs_source;
    j["validate"] = c.validate;
    j["force_mc_fbar"] = c.force_mc_fbar;
    j["delta_sweep"] = c.delta_sweep;
    j["oracle_particles"] = c.oracle_particles;
    j["oracle_inner_trials"] = c.oracle_inner_trials;
    return j;
}

void write_curve_csv(const std::string& path, const SurvivalCurve& curve) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "t_n,survival_prob,hitting_cdf,std_err\n";
    for (std::size_t i = 0; i < curve.horizons.size(); ++i)
        out << fmt(curve.horizons[i]) << ',' << fmt(curve.probabilities[i]) << ','
            << fmt(1.0 - curve.probabilities[i]) << ',' << fmt(curve.std_errs[i]) << '\n';
}

void write_curve_sidecar(const std::string& path, const RunConfig& c, const SurvivalCurve& curve,
                         double delta_used) {
    nlohmann::ordered_json j;
    j["config"] = config_json(c);
    j["config"]["delta"] = delta_used;
    j["meta"]["fbar_method"] = curve.meta.fbar_method;
    j["meta"]["grid_size"] = curve.meta.grid_size;
    j["meta"]["trials"] = curve.meta.trials;
    j["meta"]["fbar_steps"] = curve.meta.fbar_steps;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

std::string delta_suffix(double d) {
    std::string s = "_delta" + fmt(d);
    for (auto& ch : s)
        if (ch == '.') ch = 'p';
    return s;
}

struct ScenarioOutput {
    std::vector<double> obs;
    SurvivalCurve curve;
};

ScenarioOutput run_one(const RunConfig& c, const DiffusionModel& model,
                       const MarginalQuantization& mq, const TimeGrid& grid,
                       const std::string& suffix) {
    namespace fs = std::filesystem;
    ScenarioOutput out;

    if (c.obs_source == "simulate") {
        RngStream rs = RngStream::derive(c.seed, kObsTag);
        const PathPair pair = model.kind == ModelKind::custom
                                  ? simulate_pair(model, grid, rs)
                                  : simulate_pair_exact(model, grid, rs);
        out.obs = pair.obs;
        std::vector<double> times(grid.times.begin(),
                                  grid.times.begin() + static_cast<long>(c.obs_steps + 1));
        write_observation_csv((fs::path(c.out_dir) / ("observations" + suffix + ".csv")).string(),
                              times, out.obs);
    } else {
        out.obs = load_observation_csv(c.obs_source, c.t_obs, c.obs_steps);
    }

    const FilterState filter = filter_recursion(mq, out.obs, model, c.barrier, c.kernel);

    CurveConfig cc;
    cc.budget = c.budget;
    cc.fbar_steps = c.fbar_steps;
    cc.fbar_trials = c.fbar_trials;
    cc.kernel = c.kernel;
    cc.force_mc = c.force_mc_fbar;
    cc.seed = c.seed;
    cc.threads = c.threads;
    out.curve = survival_curve(model, mq, filter, c.barrier, c.horizons, cc);

    write_curve_csv((fs::path(c.out_dir) / ("curve" + suffix + ".csv")).string(), out.curve);
    write_curve_sidecar((fs::path(c.out_dir) / ("curve" + suffix + ".json")).string(), c,
                        out.curve, model.kind == ModelKind::gbm ? model.gbm.delta
                                                                : model.ou.delta);
    return out;
}

void run_validation(const RunConfig& c, const DiffusionModel& model,
                    const ScenarioOutput& scenario) {
    // Evenly spaced subset of the horizon list.
    std::vector<double> horizons;
    std::vector<std::size_t> picks;
    const std::size_t n = scenario.curve.horizons.size();
    const std::size_t want = std::min(c.validate_horizon_count, n);
    for (std::size_t i = 0; i < want; ++i)
        picks.push_back(want == 1 ? n - 1 : i * (n - 1) / (want - 1));
    for (std::size_t p : picks) horizons.push_back(scenario.curve.horizons[p]);

    OracleConfig oc;
    oc.particles = c.oracle_particles;
    oc.inner_trials = c.oracle_inner_trials;
    oc.fbar_steps = c.fbar_steps;
    oc.kernel = c.kernel;
    oc.exact_paths = c.oracle_exact_paths || c.kernel == KernelChoice::lognormal;
    oc.closed_form_fbar = c.model == "gbm" && !c.force_mc_fbar;
    oc.seed = c.seed + 1;
    oc.threads = c.threads;
    const OracleResult oracle = particle_conditional_survival(
        model, scenario.obs, c.t_obs, c.barrier, horizons, oc);

    const std::string path =
        (std::filesystem::path(c.out_dir) / "validation.csv").string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "t_n,filter,oracle,abs_diff\n";
    std::cout << "filter vs particle oracle (ESS " << fmt(oracle.effective_sample_size);
    if (oracle.degenerate_weights) std::cout << ", WARNING: degenerate weights";
    std::cout << ")\n";
    for (std::size_t i = 0; i < horizons.size(); ++i) {
        const double f = scenario.curve.probabilities[picks[i]];
        const double o = oracle.probabilities[i];
        out << fmt(horizons[i]) << ',' << fmt(f) << ',' << fmt(o) << ',' << fmt(std::abs(f - o))
            << '\n';
        std::cout << "  t_n=" << fmt(horizons[i]) << "  filter=" << fmt(f) << "  oracle=" << fmt(o)
                  << "  |diff|=" << fmt(std::abs(f - o)) << '\n';
    }
}

}  // namespace

void write_observation_csv(const std::string& path, const std::vector<double>& times,
                           const std::vector<double>& values) {
    if (times.size() != values.size())
        throw ShapeError("write_observation_csv: times and values must align");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "t,y\n";
    // full round-trip precision: these files feed back in as inputs
    char buf[64];
    for (std::size_t i = 0; i < times.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", times[i], values[i]);
        out << buf;
    }
}

std::vector<double> load_observation_csv(const std::string& path, double t_obs,
                                         std::size_t obs_steps) {
    std::ifstream in(path);
    if (!in) throw ConfigError("obs", "cannot open observation file '" + path + "'");
    std::vector<double> times, values;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) continue;
        try {
            times.push_back(std::stod(line.substr(0, comma)));
            values.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            continue;  // header or malformed line
        }
    }
    if (values.size() != obs_steps + 1)
        throw ConfigError("obs", "expected " + std::to_string(obs_steps + 1) + " rows, got " +
                                     std::to_string(values.size()));
    for (std::size_t k = 0; k <= obs_steps; ++k) {
        const double expected = t_obs * static_cast<double>(k) / static_cast<double>(obs_steps);
        if (std::abs(times[k] - expected) > 1e-6 * (1.0 + t_obs))
            throw ConfigError("obs", "observation times do not match the grid at row " +
                                         std::to_string(k));
    }
    return values;
}

void run_scenario(const RunConfig& c) {
    c.check();
    namespace fs = std::filesystem;
    fs::create_directories(c.out_dir);

    const TimeGrid grid = TimeGrid::observation(c.t_obs, c.obs_steps);
    const DiffusionModel base_model = c.make_model();
    {
        const double lo = std::min(c.barrier, std::min(c.x0, c.y0)) * 0.5;
        const double hi = std::max(c.x0, c.y0) * 2.0 + 1.0;
        base_model.check_coefficients(lo, hi, lo, hi, c.t_obs);
    }

    // Quantization is shared by every delta in a sweep; it reflects the signal
    // dynamics only.
    const std::string key = quantization_key(c);
    const std::string cache_path =
        (fs::path(c.out_dir) / ("quant_cache_" + std::to_string(fnv1a(key)) + ".json")).string();
    MarginalQuantization mq;
    bool loaded = c.use_cache && load_quantization_cache(cache_path, key, mq);
    if (!loaded) {
        mq = build_marginal_quantization(base_model, grid, c.budget);
        if (c.use_cache) save_quantization_cache(cache_path, key, mq);
    }

    if (!c.delta_sweep) {
        const ScenarioOutput scenario = run_one(c, base_model, mq, grid, "");
        if (c.validate) run_validation(c, base_model, scenario);
        return;
    }

    for (double d : c.delta_sweep_values) {
        RunConfig cd = c;
        cd.delta = d;
        const DiffusionModel model = c.make_model_with_delta(d);
        run_one(cd, model, mq, grid, delta_suffix(d));
    }
}

}  // namespace survfilter
