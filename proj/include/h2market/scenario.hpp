#pragma once

#include <map>
#include <string>
#include <vector>

#include "h2market/contracts.hpp"
#include "h2market/solvers.hpp"

namespace h2market {

/// The three exogenous shocks studied on top of the baseline calibration.
enum class ScenarioKind { tech_breakthrough, policy_change, downturn };
ScenarioKind scenario_from_string(const std::string& s);
const char* name(ScenarioKind k);

/// Returns a modified copy of the base calibration for a shock; the base
/// is left untouched.
///   tech_breakthrough: theta 0.0002->0.00012, s1_green 0.2->0.15,
///                      alpha range [0.1,0.7]->[0.4,0.8]
///   policy_change:     b range ->[0.004,0.012], s2_green 0.05->0.03,
///                      r0 0.10->0.15
///   downturn:          q ->2.625, d0 scaled by kDownturnDemandFactor,
///                      vartheta 0.05->0.07
/// The downturn demand factor maps the shocked overall demand band onto
/// the d0 series (midpoint over top of the stated range).
inline constexpr double kDownturnDemandFactor = 2950.0 / 3900.0;
MarketCalibration apply_scenario(const MarketCalibration& base, ScenarioKind kind);

/// A named run request: calibration, regimes to roll out, bargaining powers.
struct ScenarioSpec {
    std::string label = "baseline";
    MarketCalibration calibration;
    std::vector<Regime> regimes = {Regime::ct, Regime::cn, Regime::co};
    BargainingPowers powers;  ///< defaults to the first bargaining case
    SolverSettings settings;
};

/// Per-period record of the coordinated regime's contracts.
struct ContractRecord {
    std::array<CoordinationContract, kNumTypes> by_type{};
    std::array<LumpSumBounds, kNumTypes> bounds{};
    std::array<SurplusAllocation, kNumTypes> surplus{};
    std::array<bool, kNumTypes> feasible{};
    std::array<MemberProfits, kNumTypes> ct_profits{};  ///< disagreement profits
    std::array<MemberProfits, kNumTypes> cn_profits{};  ///< cooperative, contract-free
    std::array<MemberProfits, kNumTypes> co_profits{};  ///< with the contract applied
    MemberProfits coordinated;  ///< summed coordinated member profits
};

/// Trajectory of one regime across the horizon.
struct RegimePath {
    Regime regime = Regime::ct;
    std::vector<RegimeOutcome> outcomes;      ///< one per period
    std::vector<double> penetration;          ///< r_0 .. r_T (length horizon+1)
    std::vector<bool> clamped;                ///< clamp flag per transition
    std::vector<std::array<double, kNumTypes>> shares;  ///< per period
    std::vector<MemberProfits> profits;       ///< per period (co: coordinated)
    std::vector<ContractRecord> contracts;    ///< co regime only
    MemberProfits cumulative;
};

struct ScenarioRun {
    ScenarioSpec spec;
    std::map<Regime, RegimePath> paths;
};

/// Rolls the single-period solvers across the horizon. Each regime evolves
/// its own penetration state from its own prices and green share; the
/// coordinated regime reuses the cooperative decisions and adds contracts
/// against the market-based disagreement outcome at its own state.
ScenarioRun rollout(const ScenarioSpec& spec);

/// Commission sweep: re-runs the coordinated trajectory with the
/// commission fixed at each grid value and reports final-period outcomes.
struct CommissionSweepRow {
    double delta = 0.0;
    double hub_commission_margin = 0.0;  ///< delta * sum (price-cost)*Q, final period
    double hub_profit_co = 0.0;          ///< coordinated hub profit, final period
    double shp_profit_co = 0.0;
    double chpe_profit_co = 0.0;
    std::array<double, kNumTypes> avg_price{};
    std::array<double, kNumTypes> share{};
    double penetration_final = 0.0;
};
struct CommissionSweep {
    std::vector<CommissionSweepRow> rows;
    double best_delta = 0.0;  ///< grid argmax of the hub commission margin
};
CommissionSweep commission_sweep(const ScenarioSpec& spec, const std::vector<double>& grid);

/// Bargaining sweep over power cases: per-case contracts and profits for
/// the final period of the coordinated trajectory.
struct BargainingRow {
    int case_id = 0;
    BargainingPowers powers;
    double omega_shp = 0.0;   ///< summed over types, final period
    double omega_chpe = 0.0;
    MemberProfits profits;    ///< coordinated member profits, final period
    bool feasible = true;
};
std::vector<BargainingRow> bargaining_sweep(const ScenarioSpec& spec,
                                            const std::vector<BargainingPowers>& cases);

/// Ten documented default bargaining cases; hub power rises from 0.1 to
/// 0.325, the producers splitting the rest equally.
std::vector<BargainingPowers> default_bargaining_cases();

/// One-at-a-time sensitivity of headline outcomes to a named parameter.
/// Supported paths: theta, gamma, rho, beta, vartheta, r0, q,
/// d0.<type>, s1.<type>, s2.<type>, cost.<type>.<producer>,
/// lead_time.<producer>, delta.
struct SensitivityRow {
    double rel_delta = 0.0;
    MemberProfits cn_profit_total;      ///< summed over the horizon
    double final_green_share = 0.0;
    double final_penetration = 0.0;
    double total_demand = 0.0;          ///< summed quantities over the horizon (cn)
};
std::vector<SensitivityRow> sensitivity(const ScenarioSpec& spec, const std::string& path,
                                        const std::vector<double>& rel_deltas);

/// Applies a relative perturbation to a named parameter (used by
/// sensitivity; exposed for tests).
MarketCalibration perturb(const MarketCalibration& base, const std::string& path,
                          double rel_delta);

}  // namespace h2market
