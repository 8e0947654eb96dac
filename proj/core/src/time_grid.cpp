#include "survfilter/time_grid.hpp"

#include <cmath>

#include "survfilter/errors.hpp"

namespace survfilter {

TimeGrid TimeGrid::observation(double t_obs, std::size_t obs_steps) {
    if (!(t_obs > 0.0)) throw InvalidParameter("observation horizon must be positive");
    if (obs_steps == 0) throw InvalidParameter("observation grid needs at least one step");
    TimeGrid g;
    g.times.resize(obs_steps + 1);
    for (std::size_t k = 0; k <= obs_steps; ++k)
        g.times[k] = t_obs * static_cast<double>(k) / static_cast<double>(obs_steps);
    g.obs_index = obs_steps;
    g.end_index = obs_steps;
    return g;
}

TimeGrid TimeGrid::two_segment(double t_obs, std::size_t obs_steps, double t_end,
                               std::size_t post_steps) {
    if (!(t_end > t_obs)) throw InvalidParameter("terminal horizon must exceed observation horizon");
    if (post_steps == 0) throw InvalidParameter("continuation segment needs at least one step");
    TimeGrid g = observation(t_obs, obs_steps);
    g.times.reserve(obs_steps + post_steps + 1);
    for (std::size_t k = 1; k <= post_steps; ++k)
        g.times.push_back(t_obs + (t_end - t_obs) * static_cast<double>(k) /
                                      static_cast<double>(post_steps));
    g.end_index = obs_steps + post_steps;
    return g;
}

void TimeGrid::validate() const {
    if (times.empty() || times.front() != 0.0)
        throw InvalidParameter("time grid must start at 0");
    if (obs_index > end_index || end_index != times.size() - 1)
        throw InvalidParameter("time grid indices inconsistent with length");
    for (std::size_t k = 0; k + 1 < times.size(); ++k)
        if (!(times[k + 1] > times[k]))
            throw InvalidParameter("time grid must be strictly increasing");

    auto check_regular = [&](std::size_t lo, std::size_t hi) {
        if (hi <= lo + 1) return;
        double step = (times[hi] - times[lo]) / static_cast<double>(hi - lo);
        for (std::size_t k = lo; k < hi; ++k)
            if (std::abs(times[k + 1] - times[k] - step) > 1e-9 * (1.0 + std::abs(step)))
                throw InvalidParameter("time grid segment is not regularly spaced");
    };
    check_regular(0, obs_index);
    check_regular(obs_index, end_index);
}

}  // namespace survfilter
