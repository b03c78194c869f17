#include "h2market/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace h2market {

namespace {

/// The oracle keeps its own forward-demand evaluation and numeric price
/// inversion so that it certifies the solvers without sharing their
/// closed-form inversion path.
struct OracleChannel {
    double d0, s1, s2, lead, tau, beta_r, qv, vt;
    double cost, capacity, commission;
    double floor, ceiling, choke;

    double demand_at(double price) const {
        return d0 * (beta_r + std::exp(-(s1 / qv) * std::pow(price, vt + 1.0) -
                                       s2 * lead / tau));
    }
    /// price clearing the curve at quantity q, by bisection on demand
    double price_at(double q) const {
        if (q <= floor) return choke;
        if (q >= ceiling) return 0.0;
        double lo = 0.0, hi = choke;
        for (int it = 0; it < 100; ++it) {
            double mid = 0.5 * (lo + hi);
            if (demand_at(mid) > q)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    }
};

OracleChannel make_channel(const MarketCalibration& cal, const MarketState& state,
                           HydrogenType i, Producer j, double y) {
    OracleChannel c{};
    c.d0 = cal.d0_of(i);
    c.s1 = cal.s1_of(i);
    c.s2 = cal.s2_of(i);
    c.lead = effective_lead_time(cal, j, j == Producer::chpe ? y : 0.0);
    c.tau = cal.tau;
    c.beta_r = cal.beta * state.r;
    c.vt = cal.vartheta;
    c.qv = std::pow(cal.q_at(state.t), cal.vartheta);
    c.cost = cal.cost_at(i, j, state.t);
    c.capacity = cal.capacity_at(i, j, state.t);
    c.commission = cal.delta_at(state.t);
    c.floor = c.d0 * c.beta_r;
    c.ceiling = c.d0 * (c.beta_r + std::exp(-c.s2 * c.lead / c.tau));
    double inner = c.qv / c.s1 * (-std::log(kChokeRelative) - c.s2 * c.lead / c.tau);
    c.choke = std::pow(std::fmax(inner, 0.0), 1.0 / (c.vt + 1.0));
    return c;
}

/// Trapezoid prefix integral of the channel price along quantity.
struct PriceIntegral {
    double hz = 0.0;
    std::vector<double> price;
    std::vector<double> prefix;

    void build(const OracleChannel& ch, double z_max, int nodes) {
        hz = z_max / nodes;
        price.resize(static_cast<std::size_t>(nodes) + 1);
        prefix.resize(price.size());
        for (std::size_t m = 0; m < price.size(); ++m)
            price[m] = ch.price_at(hz * static_cast<double>(m));
        prefix[0] = 0.0;
        for (std::size_t m = 1; m < price.size(); ++m)
            prefix[m] = prefix[m - 1] + 0.5 * (price[m - 1] + price[m]) * hz;
    }
    double value(double z) const {
        if (z <= 0.0) return 0.0;
        double pos = z / hz;
        auto m = static_cast<std::size_t>(pos);
        if (m >= prefix.size() - 1) return prefix.back();
        double frac = (pos - static_cast<double>(m)) * hz;
        double p_here = price[m] + (price[m + 1] - price[m]) * (frac / hz);
        return prefix[m] + 0.5 * (price[m] + p_here) * frac;
    }
};

struct OracleContext {
    const MarketCalibration* cal;
    OracleChannel shp, chpe;
    PriceIntegral w_shp, w_chpe;
    double y;
    int n;
    double cell_s, cell_c;

    /// quantity-stage payoffs; the price enters as the marginal revenue of
    /// quantity along the regime's quantity path, so the gradients match
    /// the stationarity system being certified
    double payoff_shp(double qs, double qc) const {
        return (1.0 - shp.commission) * (w_shp.value(qc + qs) - w_shp.value(qc) - shp.cost * qs) -
               cal->theta * qs * qs;
    }
    double payoff_chpe(double qc, double qs) const {
        return (1.0 - chpe.commission) *
                   (w_chpe.value(qs + qc) - w_chpe.value(qs) - chpe.cost * qc) -
               cal->rho * y * std::log1p(qc);
    }
    double joint(double qs, double qc) const {
        return (1.0 - shp.commission) * (w_shp.value(qs) - shp.cost * qs) -
               cal->theta * qs * qs +
               (1.0 - chpe.commission) * (w_chpe.value(qc) - chpe.cost * qc) -
               cal->rho * y * std::log1p(qc);
    }
};

OracleContext make_context(const MarketCalibration& cal, const MarketState& state,
                           HydrogenType i, double y, const SolverSettings& settings) {
    OracleContext ctx{};
    ctx.cal = &cal;
    ctx.y = y;
    ctx.shp = make_channel(cal, state, i, Producer::shp, y);
    ctx.chpe = make_channel(cal, state, i, Producer::chpe, y);
    ctx.n = std::max(settings.oracle_grid, 2);
    ctx.cell_s = ctx.shp.capacity > 0.0 ? ctx.shp.capacity / (ctx.n - 1) : 0.0;
    ctx.cell_c = ctx.chpe.capacity > 0.0 ? ctx.chpe.capacity / (ctx.n - 1) : 0.0;
    double z_max = std::fmax(ctx.shp.capacity + ctx.chpe.capacity, 1.0);
    int nodes = std::max(4096, 8 * ctx.n);
    ctx.w_shp.build(ctx.shp, z_max, nodes);
    ctx.w_chpe.build(ctx.chpe, z_max, nodes);
    return ctx;
}

int axis_points(const OracleContext& ctx, Producer j) {
    double cap = j == Producer::shp ? ctx.shp.capacity : ctx.chpe.capacity;
    return cap > 0.0 ? ctx.n : 1;
}

double axis_value(const OracleContext& ctx, Producer j, int idx) {
    return idx * (j == Producer::shp ? ctx.cell_s : ctx.cell_c);
}

int snap(const OracleContext& ctx, Producer j, double q) {
    double cell = j == Producer::shp ? ctx.cell_s : ctx.cell_c;
    if (cell <= 0.0) return 0;
    int idx = static_cast<int>(std::lround(q / cell));
    return std::clamp(idx, 0, axis_points(ctx, j) - 1);
}

}  // namespace

double nash_deviation_gain(const MarketCalibration& cal, const MarketState& state,
                           HydrogenType i, double y, double q_shp, double q_chpe,
                           const SolverSettings& settings) {
    OracleContext ctx = make_context(cal, state, i, y, settings);
    int is0 = snap(ctx, Producer::shp, q_shp);
    int ic0 = snap(ctx, Producer::chpe, q_chpe);
    double qs0 = axis_value(ctx, Producer::shp, is0);
    double qc0 = axis_value(ctx, Producer::chpe, ic0);
    double base_s = ctx.payoff_shp(qs0, qc0);
    double base_c = ctx.payoff_chpe(qc0, qs0);
    double gain = 0.0;
    for (int a = 0; a < axis_points(ctx, Producer::shp); ++a)
        gain = std::fmax(gain, ctx.payoff_shp(axis_value(ctx, Producer::shp, a), qc0) - base_s);
    for (int b = 0; b < axis_points(ctx, Producer::chpe); ++b)
        gain = std::fmax(gain, ctx.payoff_chpe(axis_value(ctx, Producer::chpe, b), qs0) - base_c);
    return gain;
}

OracleResult grid_oracle(const MarketCalibration& cal, const MarketState& state, HydrogenType i,
                         double y, const SolverSettings& settings) {
    OracleContext ctx = make_context(cal, state, i, y, settings);
    OracleResult out;
    out.cell_shp = ctx.cell_s;
    out.cell_chpe = ctx.cell_c;
    const int ns = axis_points(ctx, Producer::shp);
    const int nc = axis_points(ctx, Producer::chpe);

    // --- quantity-competition point: grid best-response iteration
    int is = ns / 2, ic = nc / 2;
    for (int sweep = 0; sweep < 64; ++sweep) {
        double qc = axis_value(ctx, Producer::chpe, ic);
        int best_a = 0;
        double best_v = -std::numeric_limits<double>::infinity();
        for (int a = 0; a < ns; ++a) {
            double v = ctx.payoff_shp(axis_value(ctx, Producer::shp, a), qc);
            if (v > best_v) {
                best_v = v;
                best_a = a;
            }
        }
        double qs = axis_value(ctx, Producer::shp, best_a);
        int best_b = 0;
        best_v = -std::numeric_limits<double>::infinity();
        for (int b = 0; b < nc; ++b) {
            double v = ctx.payoff_chpe(axis_value(ctx, Producer::chpe, b), qs);
            if (v > best_v) {
                best_v = v;
                best_b = b;
            }
        }
        bool settled = best_a == is && best_b == ic;
        is = best_a;
        ic = best_b;
        if (settled) break;
    }
    out.ct_q_shp = axis_value(ctx, Producer::shp, is);
    out.ct_q_chpe = axis_value(ctx, Producer::chpe, ic);
    out.nash_gain =
        nash_deviation_gain(cal, state, i, y, out.ct_q_shp, out.ct_q_chpe, settings);

    // --- joint-payoff maximizer (cooperative integration); the payoff is
    // separable but the scan is exhaustive by design
    double best_joint = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < ns; ++a) {
        double qs = axis_value(ctx, Producer::shp, a);
        for (int b = 0; b < nc; ++b) {
            double qc = axis_value(ctx, Producer::chpe, b);
            double v = ctx.joint(qs, qc);
            if (v > best_joint) {
                best_joint = v;
                out.cn_q_shp = qs;
                out.cn_q_chpe = qc;
            }
        }
    }

    // --- concavity probe and grid-resolution bound
    // SHP payoff: own-quantity second differences everywhere; CHPE: the
    // delivery-investment cost term everywhere (its curvature is the
    // claimed -rho*y/(Q+1)^2), plus the payoff inside the priced band.
    double max_dd = -std::numeric_limits<double>::infinity();
    double tol_s = 1e-9 * std::fmax(1.0, std::fabs(best_joint));
    bool concave = true;
    if (ctx.cell_s > 0.0) {
        // the W-part depends on the total only, so scanning the total axis
        // covers every rival-quantity row at once
        double h = ctx.cell_s;
        double z_max = ctx.shp.capacity + ctx.chpe.capacity;
        for (double z = h; z + h <= z_max; z += h) {
            double dd = (1.0 - ctx.shp.commission) *
                            (ctx.w_shp.value(z + h) - 2.0 * ctx.w_shp.value(z) +
                             ctx.w_shp.value(z - h)) -
                        2.0 * cal.theta * h * h;
            max_dd = std::fmax(max_dd, dd);
            if (dd > tol_s) concave = false;
        }
    }
    for (int b = 1; b + 1 < nc; ++b) {
        double q0 = axis_value(ctx, Producer::chpe, b);
        double cost_dd = cal.rho * y * (std::log1p(q0 + ctx.cell_c) - 2.0 * std::log1p(q0) +
                                        std::log1p(q0 - ctx.cell_c));
        if (cost_dd > tol_s) concave = false;  // cost must be concave increasing
        if (q0 - ctx.cell_c > ctx.chpe.floor && q0 + ctx.cell_c < ctx.chpe.ceiling) {
            double dd = ctx.payoff_chpe(q0 + ctx.cell_c, 0.0) -
                        2.0 * ctx.payoff_chpe(q0, 0.0) + ctx.payoff_chpe(q0 - ctx.cell_c, 0.0);
            max_dd = std::fmax(max_dd, dd);
            if (dd > tol_s) concave = false;
        }
    }
    out.concave = concave;
    out.max_second_difference = std::isfinite(max_dd) ? max_dd : 0.0;

    // local curvature at the competition point, with slack: a unilateral
    // improvement from the cell nearest a stationary point cannot exceed
    // a few curvature units of one cell
    auto curvature = [&](Producer j, int idx, int other_idx) {
        int pts = axis_points(ctx, j);
        if (pts < 3) return 0.0;
        int k = std::clamp(idx, 1, pts - 2);
        double cell = j == Producer::shp ? ctx.cell_s : ctx.cell_c;
        double q = axis_value(ctx, j, k);
        double other = axis_value(ctx, j == Producer::shp ? Producer::chpe : Producer::shp,
                                  other_idx);
        double a = j == Producer::shp ? ctx.payoff_shp(q - cell, other)
                                      : ctx.payoff_chpe(q - cell, other);
        double m = j == Producer::shp ? ctx.payoff_shp(q, other) : ctx.payoff_chpe(q, other);
        double b = j == Producer::shp ? ctx.payoff_shp(q + cell, other)
                                      : ctx.payoff_chpe(q + cell, other);
        return std::fabs(a - 2.0 * m + b);
    };
    double curv = std::fmax(curvature(Producer::shp, is, ic), curvature(Producer::chpe, ic, is));
    out.nash_gain_bound = 4.0 * curv + 1e-9 * std::fmax(1.0, std::fabs(best_joint));
    return out;
}

}  // namespace h2market
