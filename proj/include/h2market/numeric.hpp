#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>

namespace h2market::numeric {

/// Brent root finder on [a, b]; f(a) and f(b) must have opposite signs.
/// Returns the root location; tol is absolute in x (plus machine-relative).
double brent_root(const std::function<double(double)>& f, double a, double b,
                  double tol = 1e-13, int max_iter = 200);

/// Golden-section maximization of f on [a, b], followed by a parabolic
/// refinement; returns argmax. Deterministic, derivative-free.
double golden_max(const std::function<double(double)>& f, double a, double b,
                  double tol = 1e-10, int max_iter = 400);

/// splitmix64: tiny deterministic generator used only in test sampling.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }
};

inline double rel_diff(double a, double b) {
    double scale = std::fmax(std::fabs(a), std::fabs(b));
    if (scale == 0.0) return 0.0;
    return std::fabs(a - b) / scale;
}

}  // namespace h2market::numeric
