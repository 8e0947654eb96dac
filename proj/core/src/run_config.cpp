#include "survfilter/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "survfilter/errors.hpp"

namespace survfilter {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError(key, "expected a number, got '" + v + "'");
    }
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const unsigned long long x = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError(key, "expected a non-negative integer, got '" + v + "'");
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key, "expected true/false, got '" + v + "'");
}

std::vector<double> parse_double_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(to_double(key, item));
    }
    if (out.empty()) throw ConfigError(key, "empty list");
    return out;
}

}  // namespace

std::vector<double> parse_horizons(const std::string& text) {
    const auto c1 = text.find(':');
    if (c1 == std::string::npos) return parse_double_list("horizons", text);
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string::npos)
        throw ConfigError("horizons", "range form is lo:step:hi, got '" + text + "'");
    const double lo = to_double("horizons", trim(text.substr(0, c1)));
    const double step = to_double("horizons", trim(text.substr(c1 + 1, c2 - c1 - 1)));
    const double hi = to_double("horizons", trim(text.substr(c2 + 1)));
    if (!(step > 0.0) || !(hi >= lo)) throw ConfigError("horizons", "need step > 0 and hi >= lo");
    std::vector<double> out;
    const std::size_t count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(lo + step * static_cast<double>(i));
    return out;
}

void apply_preset(RunConfig& c, const std::string& name) {
    if (name == "gbm-fig1") {
        c.preset = name;
        c.model = "gbm";
        c.mu = 0.03;
        c.sigma = 0.03;
        c.delta = 0.1;
        c.x0 = c.y0 = 86.3;
        c.barrier = 76.0;
        c.t_obs = 1.0;
        c.obs_steps = 50;
        c.budget = 1000;
        c.horizons = parse_horizons("1.1:0.1:11");
        c.kernel = KernelChoice::lognormal;
        c.fbar_steps = 50;
        c.fbar_trials = 100000;
    } else if (name == "ou-fig3") {
        c.preset = name;
        c.model = "ou";
        c.lambda = 0.18;
        c.theta = 0.35;
        c.sigma = 0.12;
        c.delta = 0.16;
        c.x0 = c.y0 = 0.35;
        c.barrier = 0.2;
        c.t_obs = 1.0;
        c.obs_steps = 50;
        c.budget = 1000;
        c.horizons = parse_horizons("1.1:0.1:6");
        c.kernel = KernelChoice::gaussian;
        c.fbar_steps = 50;
        c.fbar_trials = 100000;
    } else {
        throw ConfigError("preset", "unknown preset '" + name + "'");
    }
}

void apply_config_line(RunConfig& c, const std::string& raw) {
    std::string line = raw;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) return;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "preset") apply_preset(c, value);
    else if (key == "model") {
        if (value != "gbm" && value != "ou") throw ConfigError(key, "must be gbm or ou");
        c.model = value;
    }
    else if (key == "mu") c.mu = to_double(key, value);
    else if (key == "sigma") c.sigma = to_double(key, value);
    else if (key == "delta") c.delta = to_double(key, value);
    else if (key == "lambda") c.lambda = to_double(key, value);
    else if (key == "theta") c.theta = to_double(key, value);
    else if (key == "x0") c.x0 = to_double(key, value);
    else if (key == "y0") c.y0 = to_double(key, value);
    else if (key == "barrier") c.barrier = to_double(key, value);
    else if (key == "t_obs") c.t_obs = to_double(key, value);
    else if (key == "obs_steps") c.obs_steps = to_u64(key, value);
    else if (key == "horizons") c.horizons = parse_horizons(value);
    else if (key == "budget") c.budget = to_u64(key, value);
    else if (key == "fbar_steps") c.fbar_steps = to_u64(key, value);
    else if (key == "fbar_trials") c.fbar_trials = to_u64(key, value);
    else if (key == "kernel") {
        if (value == "gaussian") c.kernel = KernelChoice::gaussian;
        else if (value == "lognormal") c.kernel = KernelChoice::lognormal;
        else throw ConfigError(key, "must be gaussian or lognormal");
    }
    else if (key == "seed") c.seed = to_u64(key, value);
    else if (key == "obs") c.obs_source = value;
    else if (key == "out_dir") c.out_dir = value;
    else if (key == "validate") c.validate = to_bool(key, value);
    else if (key == "force_mc_fbar") c.force_mc_fbar = to_bool(key, value);
    else if (key == "delta_sweep") c.delta_sweep = to_bool(key, value);
    else if (key == "delta_sweep_values") c.delta_sweep_values = parse_double_list(key, value);
    else if (key == "oracle_particles") c.oracle_particles = to_u64(key, value);
    else if (key == "oracle_inner_trials") c.oracle_inner_trials = to_u64(key, value);
    else if (key == "oracle_exact_paths") c.oracle_exact_paths = to_bool(key, value);
    else if (key == "validate_horizons") c.validate_horizon_count = to_u64(key, value);
    else if (key == "threads") c.threads = static_cast<unsigned>(to_u64(key, value));
    else if (key == "use_cache") c.use_cache = to_bool(key, value);
    else throw ConfigError(key, "unknown key");
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open '" + path + "'");
    RunConfig c;
    std::string line;
    while (std::getline(in, line)) apply_config_line(c, line);
    return c;
}

void RunConfig::check() const {
    if (model != "gbm" && model != "ou") throw ConfigError("model", "must be gbm or ou");
    if (!(t_obs > 0.0)) throw ConfigError("t_obs", "must be positive");
    if (obs_steps == 0) throw ConfigError("obs_steps", "must be >= 1");
    if (budget == 0) throw ConfigError("budget", "must be >= 1");
    if (fbar_steps == 0) throw ConfigError("fbar_steps", "must be >= 1");
    if (fbar_trials == 0) throw ConfigError("fbar_trials", "must be >= 1");
    if (horizons.empty()) throw ConfigError("horizons", "must not be empty");
    for (std::size_t i = 0; i < horizons.size(); ++i) {
        if (!(horizons[i] > t_obs)) throw ConfigError("horizons", "every horizon must exceed t_obs");
        if (i > 0 && !(horizons[i] > horizons[i - 1]))
            throw ConfigError("horizons", "must be strictly increasing");
    }
    if (!(barrier < x0)) throw ConfigError("barrier", "must lie below x0");
    if (model == "gbm" && !(barrier > 0.0)) throw ConfigError("barrier", "must be positive for gbm");
    if (!(sigma > 0.0)) throw ConfigError("sigma", "must be positive");
    if (!(delta > 0.0)) throw ConfigError("delta", "must be positive");
    if (model == "ou" && !(lambda >= 0.0)) throw ConfigError("lambda", "must be >= 0");
    if (model == "ou" && kernel == KernelChoice::lognormal)
        throw ConfigError("kernel", "lognormal kernel requires the gbm model");
    if (oracle_particles == 0) throw ConfigError("oracle_particles", "must be >= 1");
    if (oracle_inner_trials == 0) throw ConfigError("oracle_inner_trials", "must be >= 1");
    if (validate_horizon_count == 0) throw ConfigError("validate_horizons", "must be >= 1");
    if (delta_sweep) {
        if (delta_sweep_values.empty()) throw ConfigError("delta_sweep_values", "must not be empty");
        for (double d : delta_sweep_values)
            if (!(d > 0.0)) throw ConfigError("delta_sweep_values", "must be positive");
    }
    if (obs_source.empty()) throw ConfigError("obs", "must be 'simulate' or a CSV path");
}

DiffusionModel RunConfig::make_model() const { return make_model_with_delta(delta); }

DiffusionModel RunConfig::make_model_with_delta(double delta_override) const {
    if (model == "gbm")
        return DiffusionModel::gbm_preset(mu, sigma, delta_override, x0, y0);
    return DiffusionModel::ou_preset(lambda, theta, sigma, delta_override, x0, y0);
}

}  // namespace survfilter
