#pragma once

#include <string>
#include <vector>

#include "survfilter/run_config.hpp"

namespace survfilter {

// Executes one configured scenario: obtain observations (simulate or load),
// build or reuse the cached quantization, run the filter, write the survival
// curve CSV plus a JSON sidecar, and optionally the filter-vs-oracle report.
// Identical config and seed produce byte-identical outputs.
//
// Files written under config.out_dir:
//   observations.csv             (when simulated; per sweep: observations_delta<d>.csv)
//   curve.csv / curve.json       (per sweep: curve_delta<d>.csv / .json)
//   validation.csv               (with validate=true)
//   quant_cache_<key>.json       (with use_cache=true)
void run_scenario(const RunConfig& config);

// Observation CSV helpers: rows of t,y with a header line.
void write_observation_csv(const std::string& path, const std::vector<double>& times,
                           const std::vector<double>& values);
// Loads and checks the times against a regular grid on [0, t_obs].
std::vector<double> load_observation_csv(const std::string& path, double t_obs,
                                         std::size_t obs_steps);

}  // namespace survfilter
