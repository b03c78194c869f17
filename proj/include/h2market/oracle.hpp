#pragma once

#include "h2market/solvers.hpp"

namespace h2market {

/// Exhaustive grid certification of the per-type solvers.
///
/// The oracle works from the forward demand function only: channel prices
/// are recovered by bisection on demand (independent of the closed-form
/// inversion) and the quantity-stage payoffs are accumulated by trapezoid
/// integration of the price along the relevant quantity path, so that the
/// payoff gradient reproduces the stationarity system being certified
/// (price enters as the marginal revenue of quantity). Costs are the
/// literal production / delivery-investment terms.
struct OracleResult {
    // best-response intersection on the grid (quantity competition)
    double ct_q_shp = 0.0;
    double ct_q_chpe = 0.0;
    /// largest payoff improvement any producer can reach by a unilateral
    /// grid deviation from (ct_q_shp, ct_q_chpe)
    double nash_gain = 0.0;
    /// bound implied by the grid resolution and payoff curvature
    double nash_gain_bound = 0.0;

    // joint-payoff maximizer on the grid (cooperative integration)
    double cn_q_shp = 0.0;
    double cn_q_chpe = 0.0;

    double cell_shp = 0.0;  ///< grid cell size per axis
    double cell_chpe = 0.0;

    /// own-quantity second differences of the payoffs are <= 0 everywhere
    /// on the grid (the concavity the propositions assert)
    bool concave = true;
    double max_second_difference = 0.0;
};

OracleResult grid_oracle(const MarketCalibration& cal, const MarketState& state, HydrogenType i,
                         double y, const SolverSettings& settings = {});

/// Unilateral deviation gain at an arbitrary candidate point, measured on
/// the oracle grid (used to certify analytic equilibria directly).
double nash_deviation_gain(const MarketCalibration& cal, const MarketState& state,
                           HydrogenType i, double y, double q_shp, double q_chpe,
                           const SolverSettings& settings = {});

}  // namespace h2market
