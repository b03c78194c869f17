#pragma once

// Test-side reference implementations. These deliberately avoid the
// library's closed-form inversion and solver code paths: demand is
// evaluated forward from its definition and prices are recovered by
// bisection, so round trips and equilibria are certified independently.

#include <cmath>
#include <functional>

#include "h2market/calibration.hpp"
#include "h2market/market_model.hpp"
#include "h2market/numeric.hpp"

namespace testsupport {

using h2market::HydrogenType;
using h2market::MarketCalibration;
using h2market::MarketState;
using h2market::Producer;

inline double demand_ref(const MarketCalibration& cal, const MarketState& state, HydrogenType i,
                         Producer j, double price, double y) {
    double lead = std::fmax(cal.lead_time_of(j) - (j == Producer::chpe ? y : 0.0), 0.0);
    double qv = std::pow(cal.q_at(state.t), cal.vartheta);
    double expo = -(cal.s1_of(i) / qv) * std::pow(price, cal.vartheta + 1.0) -
                  cal.s2_of(i) * lead / cal.tau;
    return cal.d0_of(i) * (cal.beta * state.r + std::exp(expo));
}

/// price clearing the channel at a quantity, by bisection on demand_ref
inline double price_ref(const MarketCalibration& cal, const MarketState& state, HydrogenType i,
                        Producer j, double quantity, double y, double price_hi = 1e4) {
    double lo = 0.0, hi = price_hi;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (demand_ref(cal, state, i, j, mid, y) > quantity)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

/// Economically tame randomized calibration (single period by default).
/// Draws stay in the regime where both producers are active and interior,
/// which is what the stationarity/oracle criteria exercise.
inline MarketCalibration random_calibration(h2market::numeric::SplitMix64& rng,
                                            int horizon = 1) {
    MarketCalibration cal;
    cal.horizon = horizon;
    cal.theta = rng.log_uniform(1e-4, 5e-4);
    cal.gamma = rng.log_uniform(5.0, 100.0);
    cal.rho = rng.log_uniform(0.2, 3.0);
    cal.tau = 2.0;
    cal.beta = rng.uniform(0.01, 0.25);
    cal.vartheta = rng.uniform(0.03, 0.12);
    cal.r0 = rng.uniform(0.05, 0.4);
    cal.q.assign(horizon, rng.uniform(1.8, 3.0));
    cal.rl.assign(horizon, rng.uniform(0.0, 0.05));
    cal.alpha.assign(horizon, rng.uniform(0.1, 0.7));
    cal.delta.assign(horizon, rng.uniform(0.0, 0.25));
    for (auto i : h2market::kAllTypes) cal.b[h2market::index(i)].assign(horizon, 0.003);

    cal.d0[h2market::index(HydrogenType::green)] = rng.log_uniform(2e4, 2e5);
    cal.d0[h2market::index(HydrogenType::blue)] = rng.log_uniform(1e5, 6e5);
    cal.d0[h2market::index(HydrogenType::grey)] = rng.log_uniform(2e5, 1e6);
    cal.s1[h2market::index(HydrogenType::green)] = rng.uniform(0.15, 0.5);
    cal.s1[h2market::index(HydrogenType::blue)] = rng.uniform(0.2, 0.8);
    cal.s1[h2market::index(HydrogenType::grey)] = rng.uniform(0.25, 0.9);
    for (auto i : h2market::kAllTypes)
        cal.s2[h2market::index(i)] = rng.uniform(0.02, 0.2);

    cal.lead_time[h2market::index(Producer::shp)] = 2.0;
    cal.lead_time[h2market::index(Producer::chpe)] = rng.uniform(3.5, 6.5);

    double grey_c = rng.uniform(1.2, 2.0);
    double blue_c = grey_c + rng.uniform(0.3, 1.0);
    double green_s = rng.uniform(2.2, 4.5);
    auto set_cost = [&](HydrogenType i, Producer j, double v) {
        cal.cost[h2market::index(i)][h2market::index(j)].assign(horizon, v);
    };
    set_cost(HydrogenType::grey, Producer::chpe, grey_c);
    set_cost(HydrogenType::grey, Producer::shp, grey_c + rng.uniform(0.3, 1.0));
    set_cost(HydrogenType::blue, Producer::chpe, blue_c);
    set_cost(HydrogenType::blue, Producer::shp, blue_c + rng.uniform(0.05, 0.4));
    set_cost(HydrogenType::green, Producer::shp, green_s);
    set_cost(HydrogenType::green, Producer::chpe, green_s + rng.uniform(0.2, 1.5));

    for (auto i : h2market::kAllTypes)
        for (auto j : h2market::kAllProducers)
            cal.capacity[h2market::index(i)][h2market::index(j)].assign(
                horizon, 2.0 * cal.d0_of(i));
    return cal;
}

inline MarketState random_state(h2market::numeric::SplitMix64& rng,
                                const MarketCalibration& cal) {
    return MarketState{0, cal.r0, false};
    (void)rng;
}

}  // namespace testsupport
