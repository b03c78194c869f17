#include "h2market/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace h2market {

ScenarioKind scenario_from_string(const std::string& s) {
    if (s == "tech_breakthrough" || s == "tech") return ScenarioKind::tech_breakthrough;
    if (s == "policy_change" || s == "policy") return ScenarioKind::policy_change;
    if (s == "downturn") return ScenarioKind::downturn;
    throw std::invalid_argument("unknown scenario: " + s);
}

const char* name(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::tech_breakthrough: return "tech_breakthrough";
        case ScenarioKind::policy_change: return "policy_change";
        case ScenarioKind::downturn: return "downturn";
    }
    return "?";
}

namespace {

void fill_linear(std::vector<double>& series, double first, double last) {
    int n = static_cast<int>(series.size());
    for (int t = 0; t < n; ++t) {
        double f = n > 1 ? static_cast<double>(t) / (n - 1) : 0.0;
        series[static_cast<std::size_t>(t)] = first + (last - first) * f;
    }
}

}  // namespace

MarketCalibration apply_scenario(const MarketCalibration& base, ScenarioKind kind) {
    MarketCalibration cal = base;
    switch (kind) {
        case ScenarioKind::tech_breakthrough:
            cal.theta = 0.00012;
            cal.s1[index(HydrogenType::green)] = 0.15;
            fill_linear(cal.alpha, 0.4, 0.8);
            break;
        case ScenarioKind::policy_change:
            for (auto i : kAllTypes) fill_linear(cal.b[index(i)], 0.004, 0.012);
            cal.s2[index(HydrogenType::green)] = 0.03;
            cal.r0 = 0.15;
            break;
        case ScenarioKind::downturn:
            for (auto& v : cal.q) v = 2.625;
            for (auto i : kAllTypes) cal.d0[index(i)] *= kDownturnDemandFactor;
            cal.vartheta = 0.07;
            break;
    }
    return cal;
}

namespace {

std::array<double, kNumTypes> type_shares(const RegimeOutcome& out) {
    std::array<double, kNumTypes> shares{};
    double total = 0.0;
    for (auto i : kAllTypes) total += out.eq[index(i)].total();
    if (total <= 0.0) return shares;
    for (auto i : kAllTypes) shares[index(i)] = out.eq[index(i)].total() / total;
    return shares;
}

ContractRecord make_contract_record(const MarketCalibration& cal, int t,
                                    const RegimeOutcome& ct, const RegimeOutcome& cn,
                                    const BargainingPowers& powers) {
    ContractRecord rec;
    for (auto i : kAllTypes) {
        std::size_t k = index(i);
        rec.ct_profits[k] = ct.profits_by_type[k];
        rec.cn_profits[k] = cn.profits_by_type[k];
        if (!cal.active(i, Producer::shp, t) && !cal.active(i, Producer::chpe, t)) {
            rec.feasible[k] = true;
            continue;
        }
        const TypeEquilibrium& eq = cn.eq[k];
        CoordinationContract contract;
        if (eq.shp.quantity > 0.0)
            contract.phi_shp = phi_shp(cal, t, i, eq.shp.price, eq.shp.quantity);
        contract.phi_chpe = phi_chpe(cal, t, i, eq.chpe.price, eq.chpe.quantity, cn.y);
        rec.surplus[k] = allocate_surplus(rec.ct_profits[k], rec.cn_profits[k], powers);
        rec.bounds[k] = lump_sum_bounds(cal, t, i, rec.ct_profits[k], eq, cn.y,
                                        contract.phi_shp, contract.phi_chpe);
        rec.feasible[k] = rec.bounds[k].feasible();
        LumpSums sums = lump_sums(cal, t, i, rec.ct_profits[k], rec.cn_profits[k], eq, cn.y,
                                  contract.phi_shp, contract.phi_chpe, powers);
        contract.omega_shp = sums.omega_shp;
        contract.omega_chpe = sums.omega_chpe;
        rec.by_type[k] = contract;
        rec.co_profits[k] = coordinated_profits(cal, t, i, contract, eq, cn.y);
        rec.coordinated += rec.co_profits[k];
    }
    return rec;
}

RegimePath roll_regime(const ScenarioSpec& spec, Regime regime) {
    const MarketCalibration& cal = spec.calibration;
    RegimePath path;
    path.regime = regime;
    path.penetration.push_back(cal.r0);

    MarketState state{0, cal.r0, false};
    for (int t = 0; t < cal.horizon; ++t) {
        state.t = t;
        RegimeOutcome out =
            regime_outcome(cal, state, regime == Regime::co ? Regime::cn : regime, spec.settings);
        if (regime == Regime::co) {
            RegimeOutcome disagreement = regime_outcome(cal, state, Regime::ct, spec.settings);
            path.contracts.push_back(
                make_contract_record(cal, t, disagreement, out, spec.powers));
            path.profits.push_back(path.contracts.back().coordinated);
        } else {
            path.profits.push_back(out.profits);
        }
        path.shares.push_back(type_shares(out));
        path.cumulative += path.profits.back();

        MarketState next = penetration_step(cal, state, out.w,
                                            std::span<const std::optional<double>>(
                                                out.avg_price.data(), out.avg_price.size()));
        path.outcomes.push_back(std::move(out));
        path.penetration.push_back(next.r);
        path.clamped.push_back(next.clamped);
        state = next;
    }
    return path;
}

}  // namespace

ScenarioRun rollout(const ScenarioSpec& spec) {
    spec.calibration.validate();
    ScenarioRun run;
    run.spec = spec;
    for (Regime r : spec.regimes) run.paths.emplace(r, roll_regime(spec, r));
    return run;
}

CommissionSweep commission_sweep(const ScenarioSpec& spec, const std::vector<double>& grid) {
    CommissionSweep sweep;
    double best = -1.0;
    for (double d : grid) {
        if (d < 0.0 || d >= 1.0)
            throw std::invalid_argument("commission_sweep: delta outside [0, 1)");
        ScenarioSpec shocked = spec;
        shocked.regimes = {Regime::co};
        for (auto& v : shocked.calibration.delta) v = d;
        ScenarioRun run = rollout(shocked);
        const RegimePath& path = run.paths.at(Regime::co);
        int last = shocked.calibration.horizon - 1;
        const RegimeOutcome& out = path.outcomes[static_cast<std::size_t>(last)];
        const ContractRecord& rec = path.contracts[static_cast<std::size_t>(last)];
        CommissionSweepRow row;
        row.delta = d;
        row.hub_commission_margin = out.profits.hub;
        row.hub_profit_co = rec.coordinated.hub;
        row.shp_profit_co = rec.coordinated.shp;
        row.chpe_profit_co = rec.coordinated.chpe;
        for (auto i : kAllTypes)
            row.avg_price[index(i)] = out.avg_price[index(i)].value_or(0.0);
        row.share = path.shares[static_cast<std::size_t>(last)];
        row.penetration_final = path.penetration.back();
        if (row.hub_commission_margin > best) {
            best = row.hub_commission_margin;
            sweep.best_delta = d;
        }
        sweep.rows.push_back(row);
    }
    return sweep;
}

std::vector<BargainingPowers> default_bargaining_cases() {
    std::vector<BargainingPowers> cases;
    for (int k = 0; k < 10; ++k) {
        double hub = 0.1 + (0.325 - 0.1) * k / 9.0;
        BargainingPowers p;
        p.hub = hub;
        p.shp = p.chpe = (1.0 - hub) / 2.0;
        cases.push_back(p);
    }
    return cases;
}

std::vector<BargainingRow> bargaining_sweep(const ScenarioSpec& spec,
                                            const std::vector<BargainingPowers>& cases) {
    // decisions are independent of the transfers, so the trajectory is
    // rolled once and the final-period contracts recomputed per case
    ScenarioSpec base = spec;
    base.regimes = {Regime::co};
    ScenarioRun run = rollout(base);
    const RegimePath& path = run.paths.at(Regime::co);
    int last = base.calibration.horizon - 1;
    const RegimeOutcome& cn_out = path.outcomes[static_cast<std::size_t>(last)];
    const ContractRecord& base_rec = path.contracts[static_cast<std::size_t>(last)];

    std::vector<BargainingRow> rows;
    int case_id = 0;
    for (const auto& powers : cases) {
        BargainingRow row;
        row.case_id = ++case_id;
        row.powers = powers;
        row.feasible = true;
        for (auto i : kAllTypes) {
            std::size_t k = index(i);
            if (!base.calibration.active(i, Producer::shp, last) &&
                !base.calibration.active(i, Producer::chpe, last))
                continue;
            const TypeEquilibrium& eq = cn_out.eq[k];
            CoordinationContract contract = base_rec.by_type[k];
            LumpSums sums =
                lump_sums(base.calibration, last, i, base_rec.ct_profits[k],
                          base_rec.cn_profits[k], eq, cn_out.y, contract.phi_shp,
                          contract.phi_chpe, powers);
            contract.omega_shp = sums.omega_shp;
            contract.omega_chpe = sums.omega_chpe;
            row.omega_shp += sums.omega_shp;
            row.omega_chpe += sums.omega_chpe;
            row.profits += coordinated_profits(base.calibration, last, i, contract, eq, cn_out.y);
            row.feasible = row.feasible && base_rec.bounds[k].feasible();
        }
        rows.push_back(row);
    }
    return rows;
}

MarketCalibration perturb(const MarketCalibration& base, const std::string& path,
                          double rel_delta) {
    MarketCalibration cal = base;
    double f = 1.0 + rel_delta;
    auto scale_series = [&](std::vector<double>& s) {
        for (auto& v : s) v *= f;
    };
    if (path == "theta") {
        cal.theta *= f;
    } else if (path == "gamma") {
        cal.gamma *= f;
    } else if (path == "rho") {
        cal.rho *= f;
    } else if (path == "beta") {
        cal.beta *= f;
    } else if (path == "vartheta") {
        cal.vartheta *= f;
    } else if (path == "r0") {
        cal.r0 *= f;
    } else if (path == "q") {
        scale_series(cal.q);
    } else if (path == "delta") {
        scale_series(cal.delta);
    } else if (path == "lead_time") {
        for (auto& v : cal.lead_time) v *= f;
    } else if (path.rfind("lead_time.", 0) == 0) {
        cal.lead_time[index(producer_from_string(path.substr(10)))] *= f;
    } else if (path.rfind("d0.", 0) == 0) {
        cal.d0[index(type_from_string(path.substr(3)))] *= f;
    } else if (path.rfind("s1.", 0) == 0) {
        cal.s1[index(type_from_string(path.substr(3)))] *= f;
    } else if (path.rfind("s2.", 0) == 0) {
        cal.s2[index(type_from_string(path.substr(3)))] *= f;
    } else if (path.rfind("cost.", 0) == 0) {
        std::string rest = path.substr(5);
        auto dot = rest.find('.');
        if (dot == std::string::npos)
            throw std::invalid_argument("perturb: expected cost.<type>.<producer>");
        HydrogenType i = type_from_string(rest.substr(0, dot));
        Producer j = producer_from_string(rest.substr(dot + 1));
        scale_series(cal.cost[index(i)][index(j)]);
    } else if (path.rfind("capacity.", 0) == 0) {
        std::string rest = path.substr(9);
        auto dot = rest.find('.');
        if (dot == std::string::npos)
            throw std::invalid_argument("perturb: expected capacity.<type>.<producer>");
        HydrogenType i = type_from_string(rest.substr(0, dot));
        Producer j = producer_from_string(rest.substr(dot + 1));
        scale_series(cal.capacity[index(i)][index(j)]);
    } else {
        throw std::invalid_argument("perturb: unknown parameter path: " + path);
    }
    return cal;
}

std::vector<SensitivityRow> sensitivity(const ScenarioSpec& spec, const std::string& path,
                                        const std::vector<double>& rel_deltas) {
    std::vector<SensitivityRow> rows;
    for (double d : rel_deltas) {
        if (!std::isfinite(d)) throw std::invalid_argument("sensitivity: delta must be finite");
        ScenarioSpec shocked = spec;
        shocked.calibration = perturb(spec.calibration, path, d);
        shocked.regimes = {Regime::cn};
        ScenarioRun run = rollout(shocked);
        const RegimePath& p = run.paths.at(Regime::cn);
        SensitivityRow row;
        row.rel_delta = d;
        row.cn_profit_total = p.cumulative;
        row.final_penetration = p.penetration.back();
        row.final_green_share =
            p.shares.back()[index(HydrogenType::green)];
        for (const auto& out : p.outcomes)
            for (auto i : kAllTypes) row.total_demand += out.eq[index(i)].total();
        rows.push_back(row);
    }
    return rows;
}

}  // namespace h2market
