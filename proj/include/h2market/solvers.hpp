#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "h2market/calibration.hpp"
#include "h2market/market_model.hpp"
#include "h2market/types.hpp"

namespace h2market {

struct SolverSettings {
    double tolerance = 1e-10;  ///< relative convergence tolerance
    int max_iterations = 200;  ///< damped fixed-point budget before fallback
    double damping = 0.5;      ///< fixed-point damping factor, in (0, 1]
    int oracle_grid = 400;     ///< grid points per axis in the brute-force oracle

    /// paper mode replicates the printed stationarity system (price treated
    /// as parametric at the quantity stage); full mode adds the inverse-demand
    /// slope terms. full mode is a diagnostic, not the system of record.
    enum class Mode { paper, full } mode = Mode::paper;
};

/// Solution of one (type, producer) channel.
struct ChannelSolution {
    double quantity = 0.0;
    double price = 0.0;
    double foc_residual = 0.0;  ///< relative stationarity residual
    bool active = false;        ///< channel exists (capacity > 0)
    bool capacity_bound = false;
    bool shutdown = false;  ///< no profitable entry at the margin
    int root_multiplicity = 1;

    bool bound() const { return capacity_bound || shutdown; }
};

/// Joint solution for one hydrogen type.
struct TypeEquilibrium {
    ChannelSolution shp;
    ChannelSolution chpe;
    bool degenerate = false;  ///< market shut down (costs above choke)

    double total() const { return shp.quantity + chpe.quantity; }
};

/// Market-based (quantity competition) equilibrium for one type at fixed y.
/// Each producer's price is its channel inverse demand at the *total*
/// quantity; stationarity: (1-d)(x_S - c_S) = 2*theta*Q_S and
/// (1-d)(x_C - c_C) = rho*y/(Q_C + 1). Solved by damped fixed-point
/// iteration on the total with a scan+bisection fallback; quantities are
/// projected onto [0, k] with binding flags.
TypeEquilibrium cournot_equilibrium(const MarketCalibration& cal, const MarketState& state,
                                    HydrogenType i, double y,
                                    const SolverSettings& settings = {});

/// Cooperative-integration optimum for one type at fixed y: the channels
/// decouple, each producer pricing its own demand curve at its own
/// quantity, with the same stationarity structure. Solved per channel by
/// 1-D bracketing and bisection-safe root finding.
TypeEquilibrium collusion_optimum(const MarketCalibration& cal, const MarketState& state,
                                  HydrogenType i, double y,
                                  const SolverSettings& settings = {});

/// Lead-time reduction chosen by CHPE for the period: maximizes CHPE's
/// summed per-type profit over y in [0, lt_chpe], re-solving the regime's
/// per-type equilibria at each y. boundary is set when the optimum sits on
/// an endpoint of the interval.
struct LeadTimeSolution {
    double y = 0.0;
    bool boundary = false;
    double stationarity_residual = 0.0;  ///< relative, interior optima only
};
LeadTimeSolution optimal_lead_reduction(const MarketCalibration& cal, const MarketState& state,
                                        Regime regime, const SolverSettings& settings = {});

/// Full single-period outcome of a regime (ct or cn): optimal y, per-type
/// equilibria, green share, average prices and member profits. Per-type
/// solver failures are recorded without aborting the other types.
struct RegimeOutcome {
    Regime regime = Regime::ct;
    int t = 0;
    double penetration = 0.0;  ///< state the period was solved at
    double y = 0.0;
    bool y_boundary = false;
    double w = 0.0;  ///< green share of the period's production
    std::array<TypeEquilibrium, kNumTypes> eq{};
    std::array<std::optional<double>, kNumTypes> avg_price{};
    std::array<MemberProfits, kNumTypes> profits_by_type{};
    MemberProfits profits;
    std::array<std::string, kNumTypes> errors{};  ///< per-type failure notes

    const TypeEquilibrium& of(HydrogenType i) const { return eq[index(i)]; }
};
RegimeOutcome regime_outcome(const MarketCalibration& cal, const MarketState& state,
                             Regime regime, const SolverSettings& settings = {});

/// Evaluates the printed closed forms for the stationary quantities and
/// lead-time reduction, given the supplementary constants they reference.
/// Diagnostic only; the numeric solvers are the system of record.
struct ClosedFormConstants {
    double eps1 = 0.0;
    double eps2 = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
    double f1 = 0.0;
    bool use_supplied_f1 = false;  ///< otherwise F(1) is computed from Q_chpe
};
struct ClosedFormResult {
    double q_shp = 0.0;
    double q_chpe = 0.0;
    double y = 0.0;
    double q_shp_rel_gap = 0.0;  ///< vs. the numeric reference passed in
    double q_chpe_rel_gap = 0.0;
    bool diverged = false;  ///< any relative gap above 1e-6
};
ClosedFormResult closed_form_crosscheck(const MarketCalibration& cal, const MarketState& state,
                                        HydrogenType i, double y,
                                        const ClosedFormConstants& constants,
                                        const TypeEquilibrium& numeric_reference);

}  // namespace h2market
