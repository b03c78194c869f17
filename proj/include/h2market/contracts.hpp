#pragma once

#include <optional>

#include "h2market/solvers.hpp"

namespace h2market {

/// Bargaining weights used to split the coordination surplus.
struct BargainingPowers {
    double shp = 1.0;
    double chpe = 1.0;
    double hub = 1.0;

    double sum() const { return shp + chpe + hub; }
};

/// Per-type tariff contract: cost-sharing coefficients and lump sums.
/// phi_chpe is absent when no lead-time investment exists (y == 0), in
/// which case CHPE needs no cost sharing.
struct CoordinationContract {
    double phi_shp = 0.0;
    std::optional<double> phi_chpe;
    double omega_shp = 0.0;   ///< lump sum paid by SHP to the hub (may be < 0)
    double omega_chpe = 0.0;  ///< lump sum paid by CHPE to the hub
};

/// SHP cost-sharing coefficient:
///   phi = (c - (1-d)*x_co + d*c) / (2*theta*Q_co).
/// Negative values are a fee rather than a subsidy and are returned as-is.
/// Throws std::domain_error when Q_co == 0.
double phi_shp(const MarketCalibration& cal, int t, HydrogenType i, double x_co, double q_co);

/// CHPE cost-sharing coefficient:
///   phi' = 1 - (1-d)*(x_co - c)*ln(Q_co + 1) / (rho*y).
/// Returns nullopt when y == 0 (no investment to share).
std::optional<double> phi_chpe(const MarketCalibration& cal, int t, HydrogenType i, double x_co,
                               double q_co, double y_cn);

/// Member profits under the coordinated scheme at the cooperative
/// decisions, with the contract's cost shares and lump sums applied.
MemberProfits coordinated_profits(const MarketCalibration& cal, int t, HydrogenType i,
                                  const CoordinationContract& contract,
                                  const TypeEquilibrium& cn, double y_cn);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool empty() const { return lo > hi; }
};

/// Feasible intervals for the lump sums such that every member earns at
/// least its market-based (disagreement) profit. The per-type profits are
/// affine in the lump sums, so the bounds are closed-form. An empty
/// interval is a value (coordination infeasible), not an error.
struct LumpSumBounds {
    Interval omega_shp;
    Interval omega_chpe;
    bool feasible() const { return !omega_shp.empty() && !omega_chpe.empty(); }
};
LumpSumBounds lump_sum_bounds(const MarketCalibration& cal, int t, HydrogenType i,
                              const MemberProfits& ct_profits, const TypeEquilibrium& cn,
                              double y_cn, double phi, std::optional<double> phi_prime);

/// Coordination surplus for one type and its split by bargaining power.
/// delta_pi is the three-member total under cooperation minus the total
/// under market-based pricing.
struct SurplusAllocation {
    double delta_pi = 0.0;
    double shp = 0.0;
    double chpe = 0.0;
    double hub = 0.0;
};
SurplusAllocation allocate_surplus(const MemberProfits& ct_profits,
                                   const MemberProfits& cn_profits,
                                   const BargainingPowers& powers);

/// Exact lump sums implementing the surplus split: each producer's
/// coordinated profit equals its market-based profit plus its bargaining
/// share (and therefore so does the hub's, by transfer neutrality).
/// Throws InfeasibleCoordination if the computed sums violate their own
/// feasibility intervals while those are non-empty.
struct LumpSums {
    double omega_shp = 0.0;
    double omega_chpe = 0.0;
};
LumpSums lump_sums(const MarketCalibration& cal, int t, HydrogenType i,
                   const MemberProfits& ct_profits, const MemberProfits& cn_profits,
                   const TypeEquilibrium& cn, double y_cn, double phi,
                   std::optional<double> phi_prime, const BargainingPowers& powers);

/// Convenience: full per-type contract (coefficients + lump sums).
CoordinationContract make_contract(const MarketCalibration& cal, int t, HydrogenType i,
                                   const MemberProfits& ct_profits,
                                   const MemberProfits& cn_profits, const TypeEquilibrium& cn,
                                   double y_cn, const BargainingPowers& powers);

}  // namespace h2market
