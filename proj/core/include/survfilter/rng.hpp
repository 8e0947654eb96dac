#pragma once

#include <cstdint>
#include <random>

namespace survfilter {

// splitmix64 finalizer; decorrelates arbitrary (seed, id) combinations.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic stream of standard draws. Every simulation routine takes its
// own stream; parallel workloads derive one stream per task from the master
// seed, so results are independent of thread count and scheduling.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    // Counter-based split: (master, a, b, c) -> independent stream.
    static RngStream derive(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0,
                            std::uint64_t c = 0) {
        std::uint64_t s = mix64(master);
        s = mix64(s ^ mix64(a + 0x100000001b3ULL));
        s = mix64(s ^ mix64(b + 0xcbf29ce484222325ULL));
        s = mix64(s ^ mix64(c + 0x9e3779b97f4a7c15ULL));
        return RngStream(s);
    }

    double normal() { return normal_(engine_); }

    // Uniform on the open interval (0,1).
    double uniform01() {
        double u;
        do {
            u = uniform_(engine_);
        } while (u <= 0.0 || u >= 1.0);
        return u;
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace survfilter
