#pragma once

#include <array>
#include <string>
#include <vector>

#include "h2market/types.hpp"

namespace h2market {

/// All exogenous parameters of the market model.
///
/// Units: prices and unit costs in $/kg, quantities in tons per period,
/// money flows in thousand dollars (k$ = ($/kg)*t), lead times in days.
/// theta is in k$/t^2, gamma in k$/day^2, rho in k$ per day per log-ton.
///
/// Per-period series are stored with one entry per period (length ==
/// horizon); scalar inputs are broadcast at load time.
struct MarketCalibration {
    int horizon = 10;
    int base_year = 2026;

    double theta = 2e-4;     ///< quadratic production-cost coefficient (SHP)
    double gamma = 25.0;     ///< late-delivery penalty weight
    double rho = 1.0;        ///< lead-time reduction investment rate
    double tau = 2.0;        ///< standard expected delivery lead time
    double beta = 0.1;       ///< hub-penetration demand coupling
    double vartheta = 0.05;  ///< fuel substitution exponent, in (0,1)
    double r0 = 0.10;        ///< initial penetration level

    std::array<double, kNumTypes> d0{};  ///< zero-price potential demand
    std::array<double, kNumTypes> s1{};  ///< price sensitivity per type
    std::array<double, kNumTypes> s2{};  ///< lead-time sensitivity per type
    std::array<double, kNumProducers> lead_time{};  ///< lt_j in days

    std::vector<double> q;      ///< alternative-fuel price per period
    std::vector<double> rl;     ///< penetration diminishing level per period
    std::vector<double> alpha;  ///< penetration sensitivity to green share
    std::vector<double> delta;  ///< hub commission per period

    std::array<std::vector<double>, kNumTypes> b;  ///< cross-elasticity b[i][t]

    /// cost[i][j][t], capacity[i][j][t]; capacity 0 marks an inactive channel.
    std::array<std::array<std::vector<double>, kNumProducers>, kNumTypes> cost;
    std::array<std::array<std::vector<double>, kNumProducers>, kNumTypes> capacity;

    double cost_at(HydrogenType i, Producer j, int t) const {
        return cost[index(i)][index(j)][static_cast<std::size_t>(t)];
    }
    double capacity_at(HydrogenType i, Producer j, int t) const {
        return capacity[index(i)][index(j)][static_cast<std::size_t>(t)];
    }
    bool active(HydrogenType i, Producer j, int t) const {
        return capacity_at(i, j, t) > 0.0;
    }
    double b_at(HydrogenType i, int t) const {
        return b[index(i)][static_cast<std::size_t>(t)];
    }
    double q_at(int t) const { return q[static_cast<std::size_t>(t)]; }
    double rl_at(int t) const { return rl[static_cast<std::size_t>(t)]; }
    double alpha_at(int t) const { return alpha[static_cast<std::size_t>(t)]; }
    double delta_at(int t) const { return delta[static_cast<std::size_t>(t)]; }
    double lead_time_of(Producer j) const { return lead_time[index(j)]; }
    double d0_of(HydrogenType i) const { return d0[index(i)]; }
    double s1_of(HydrogenType i) const { return s1[index(i)]; }
    double s2_of(HydrogenType i) const { return s2[index(i)]; }

    /// Checks every invariant; returns the list of violations (empty if valid).
    std::vector<std::string> violations() const;

    /// Throws ValidationError listing all violations, if any.
    void validate() const;
};

/// The evolving market state: period index and penetration level.
struct MarketState {
    int t = 0;
    double r = 0.0;
    bool clamped = false;  ///< set when the penetration update was clamped at 0
};

}  // namespace h2market
