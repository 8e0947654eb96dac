#pragma once

#include <cstddef>
#include <vector>

namespace survfilter {

// Two-segment regular discretization 0 = t_0 < ... < t_m = s < ... < t_n = t.
// The observation segment [0, s] uses spacing s/m; the continuation segment
// [s, t] uses its own spacing (t-s)/(n-m). Either segment may be empty.
struct TimeGrid {
    std::vector<double> times;
    std::size_t obs_index = 0;  // m: index of the observation horizon
    std::size_t end_index = 0;  // n: index of the terminal horizon

    // Grid ending at the observation horizon (n = m).
    static TimeGrid observation(double t_obs, std::size_t obs_steps);

    // Grid covering [0, t_obs] with obs_steps steps and [t_obs, t_end] with
    // post_steps steps.
    static TimeGrid two_segment(double t_obs, std::size_t obs_steps, double t_end,
                                std::size_t post_steps);

    double dt(std::size_t k) const { return times[k + 1] - times[k]; }
    double obs_horizon() const { return times[obs_index]; }
    double end_horizon() const { return times[end_index]; }

    // Throws InvalidParameter unless times are strictly increasing from 0 and
    // regularly spaced within each segment.
    void validate() const;
};

}  // namespace survfilter
