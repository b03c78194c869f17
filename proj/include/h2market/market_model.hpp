#pragma once

#include <optional>
#include <span>

#include "h2market/calibration.hpp"
#include "h2market/types.hpp"

namespace h2market {

/// Effective delivery lead time of a channel: max(lt_j - y, 0), with the
/// reduction y applying to CHPE only (SHP already delivers at the norm).
double effective_lead_time(const MarketCalibration& cal, Producer j, double y);

/// Demand for hydrogen of a given type from a given producer at an offered
/// price, with delivery lead-time reduction y (CHPE only):
///   d0 * [ beta*r + exp( -(s1/q^vt) * price^(vt+1) - s2 * L/tau ) ].
/// Throws std::domain_error for price < 0 or y outside [0, lt_j].
double demand(const MarketCalibration& cal, const MarketState& state, HydrogenType i,
              Producer j, double price, double y);

/// Penetration-driven demand floor d0*beta*r (demand never falls below it).
double demand_floor(const MarketCalibration& cal, const MarketState& state, HydrogenType i);

/// Channel demand at price zero: d0*(beta*r + exp(-s2*L/tau)).
double demand_ceiling(const MarketCalibration& cal, const MarketState& state, HydrogenType i,
                      Producer j, double y);

/// Price that clears the channel at a given quantity; inverse of demand().
/// Valid on the band (demand_floor, demand_ceiling]; throws std::domain_error
/// outside it (saturated or vanishing demand).
double inverse_demand(const MarketCalibration& cal, const MarketState& state, HydrogenType i,
                      Producer j, double quantity, double y);

/// Price at which the price-dependent demand component has decayed to
/// kChokeRelative of d0, i.e. demand is the penetration floor for all
/// practical purposes. Finite stand-in for the "no demand left" price.
inline constexpr double kChokeRelative = 1e-12;
double choke_price(const MarketCalibration& cal, const MarketState& state, HydrogenType i,
                   Producer j, double y);

/// Arithmetic mean of the two producers' prices for one type.
double average_price(double x_shp, double x_chpe);

/// Average price over the active sellers of a type; a single-seller type
/// returns that seller's price. Empty if no seller is active.
struct PricedChannel {
    double price = 0.0;
    bool active = false;
};
std::optional<double> average_price(const PricedChannel& shp, const PricedChannel& chpe);

/// One step of the penetration recursion:
///   r' = (1 - rl_t) * [ r + alpha_t * w - sum_i b_it * ln(avg_price_i) ].
/// avg_prices has one entry per type; a disengaged type (no seller) is
/// passed as std::nullopt and contributes no term. The result is clamped
/// at 0 from below, with the clamp flagged on the returned state.
MarketState penetration_step(const MarketCalibration& cal, const MarketState& state, double w,
                             std::span<const std::optional<double>> avg_prices);

/// Share of green hydrogen in total production. quantities[i][j] in tons.
/// Throws std::domain_error when total production is zero.
double green_share(const std::array<std::array<double, kNumProducers>, kNumTypes>& quantities);

/// SHP per-type profit: (1-delta)*(price - c)*Q - theta*Q^2.
double profit_shp(const MarketCalibration& cal, int t, HydrogenType i, double price,
                  double quantity);

/// CHPE per-type profit:
///   (1-delta)*(price - c)*Q - gamma*(lt - y - tau)^2 - rho*y*ln(Q + 1).
/// The delivery terms apply per type even at Q = 0.
double profit_chpe(const MarketCalibration& cal, int t, HydrogenType i, double price,
                   double quantity, double y);

/// One channel of a type as seen by the hub: realized price, quantity sold
/// and the producer's unit cost.
struct ChannelOutcome {
    double price = 0.0;
    double quantity = 0.0;
    double unit_cost = 0.0;
};

/// Hub commission profit: delta_t * sum over channels of (price - cost)*Q.
double profit_hub(const MarketCalibration& cal, int t, std::span<const ChannelOutcome> channels);

}  // namespace h2market
