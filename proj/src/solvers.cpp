#include "h2market/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "h2market/numeric.hpp"

namespace h2market {

namespace {

constexpr double kTiny = 1e-300;

struct ChannelCurve {
    const MarketCalibration* cal;
    const MarketState* state;
    HydrogenType type;
    Producer producer;
    double y;
    double floor;
    double ceiling;
    double choke;
    double cost;
    double capacity;
    double commission;  // delta_t

    /// Price when the curve carries a given quantity; flat at the choke
    /// below the penetration floor (rationed sales), zero past the ceiling.
    double price_at(double q_on_curve) const {
        if (q_on_curve <= floor) return choke;
        if (q_on_curve >= ceiling) return 0.0;
        return inverse_demand(*cal, *state, type, producer, q_on_curve, y);
    }

    double margin_at(double q_on_curve) const {
        return (1.0 - commission) * (price_at(q_on_curve) - cost);
    }
};

ChannelCurve make_curve(const MarketCalibration& cal, const MarketState& state, HydrogenType i,
                        Producer j, double y) {
    ChannelCurve c{};
    c.cal = &cal;
    c.state = &state;
    c.type = i;
    c.producer = j;
    c.y = (j == Producer::chpe) ? y : 0.0;
    c.floor = demand_floor(cal, state, i);
    c.ceiling = demand_ceiling(cal, state, i, j, c.y);
    c.choke = choke_price(cal, state, i, j, c.y);
    c.cost = cal.cost_at(i, j, state.t);
    c.capacity = cal.capacity_at(i, j, state.t);
    c.commission = cal.delta_at(state.t);
    return c;
}

double mc_shp(const MarketCalibration& cal, double q) { return 2.0 * cal.theta * q; }

double mc_chpe(const MarketCalibration& cal, double y, double q) {
    return cal.rho * y / (q + 1.0);
}

double foc_residual_rel(double margin, double mc) {
    double scale = std::fmax(std::fabs(margin), std::fabs(mc));
    if (scale < kTiny) return 0.0;
    return std::fabs(margin - mc) / scale;
}

/// Root of f on [a,b] given f(a)*f(b) <= 0, tightened by extra bisections
/// so the returned stationarity residual sits well below the tolerance.
double tight_root(const std::function<double(double)>& f, double a, double b) {
    double fa = f(a);
    double root = numeric::brent_root(f, a, b, 1e-14 * std::fmax(1.0, std::fabs(b)));
    // re-bracket around the brent point and bisect down to machine width
    double lo = a, hi = b, flo = fa;
    if (root > lo && root < hi) {
        double fr = f(root);
        if (flo * fr <= 0.0)
            hi = root;
        else
            lo = root;
    }
    for (int it = 0; it < 80 && (hi - lo) > 1e-15 * std::fmax(1.0, std::fabs(hi)); ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (flo * fm <= 0.0)
            hi = mid;
        else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

/// All sign-change roots of f over [lo, hi] on an n-point scan.
std::vector<double> scan_roots(const std::function<double(double)>& f, double lo, double hi,
                               int n) {
    std::vector<double> roots;
    if (!(hi > lo)) return roots;
    double prev_x = lo, prev_f = f(lo);
    for (int k = 1; k <= n; ++k) {
        double x = lo + (hi - lo) * static_cast<double>(k) / n;
        double fx = f(x);
        if (prev_f == 0.0) {
            roots.push_back(prev_x);
        } else if (std::isfinite(prev_f) && std::isfinite(fx) && prev_f * fx < 0.0) {
            roots.push_back(tight_root(f, prev_x, x));
        }
        prev_x = x;
        prev_f = fx;
    }
    if (prev_f == 0.0) roots.push_back(prev_x);
    return roots;
}

ChannelSolution solved_channel(const ChannelCurve& curve, double q, double price, double mc,
                               bool capacity_bound, bool shutdown) {
    ChannelSolution s;
    s.active = true;
    s.quantity = q;
    s.price = price;
    s.capacity_bound = capacity_bound;
    s.shutdown = shutdown;
    double margin = (1.0 - curve.commission) * (price - curve.cost);
    s.foc_residual = (capacity_bound || shutdown) ? foc_residual_rel(margin, mc)
                                                  : foc_residual_rel(margin, mc);
    return s;
}

/// Own-curve stationary solve for one channel (used by the cooperative
/// regime and by single-seller types in either regime). The price rides the
/// channel's own quantity.
ChannelSolution solve_own_channel(const MarketCalibration& cal, const ChannelCurve& curve,
                                  const SolverSettings& settings) {
    ChannelSolution out;
    if (curve.capacity <= 0.0) return out;  // inactive
    out.active = true;

    const bool is_shp = curve.producer == Producer::shp;
    auto mc = [&](double q) {
        return is_shp ? mc_shp(cal, q) : mc_chpe(cal, curve.y, q);
    };
    auto g = [&](double q) { return curve.margin_at(q) - mc(q); };

    double hi = std::fmin(curve.capacity, curve.ceiling * (1.0 - 1e-12));
    double entry = g(0.0);  // margin at the choke minus marginal cost of entry

    if (settings.mode == SolverSettings::Mode::full) {
        // diagnostic mode: maximize the literal channel profit, slope included
        auto profit = [&](double q) {
            double price = curve.price_at(q);
            return is_shp ? profit_shp(cal, curve.state->t, curve.type, price, q)
                          : profit_chpe(cal, curve.state->t, curve.type, price, q, curve.y);
        };
        double q = numeric::golden_max(profit, 0.0, hi, 1e-12);
        if (profit(0.0) >= profit(q)) q = 0.0;
        out.quantity = q;
        out.price = curve.price_at(q);
        out.shutdown = q == 0.0;
        out.capacity_bound = std::fabs(q - curve.capacity) < 1e-9 * std::fmax(1.0, curve.capacity);
        out.foc_residual = foc_residual_rel(curve.margin_at(q), mc(q));
        return out;
    }

    if (entry <= 0.0) {
        // no profitable entry at the margin: stationary at zero
        out.quantity = 0.0;
        out.price = curve.choke;
        out.shutdown = true;
        out.foc_residual = 0.0;
        return out;
    }

    std::vector<double> roots;
    if (is_shp) {
        // g is strictly decreasing for the quadratic-cost producer
        if (g(hi) > 0.0) {
            out.quantity = hi;
            out.price = curve.price_at(hi);
            out.capacity_bound = true;
            out.foc_residual = foc_residual_rel(curve.margin_at(hi), mc(hi));
            return out;
        }
        roots.push_back(tight_root(g, 1e-12 * hi, hi));
    } else {
        roots = scan_roots(g, hi * 1e-9, hi, 384);
        if (roots.empty()) {
            if (g(hi) > 0.0) {
                out.quantity = hi;
                out.price = curve.price_at(hi);
                out.capacity_bound = true;
                out.foc_residual = foc_residual_rel(curve.margin_at(hi), mc(hi));
                return out;
            }
            throw SolverError("own-channel solve: no stationary point found");
        }
    }

    // tie-break multiple stationary points by the channel's own profit
    double best_profit = -std::numeric_limits<double>::infinity();
    double best_q = roots.front();
    for (double q : roots) {
        double price = curve.price_at(q);
        double pr = is_shp ? profit_shp(cal, curve.state->t, curve.type, price, q)
                           : profit_chpe(cal, curve.state->t, curve.type, price, q, curve.y);
        if (pr > best_profit) {
            best_profit = pr;
            best_q = q;
        }
    }
    out.quantity = best_q;
    out.price = curve.price_at(best_q);
    out.root_multiplicity = static_cast<int>(roots.size());
    out.foc_residual = foc_residual_rel(curve.margin_at(best_q), mc(best_q));
    return out;
}

/// Stationary supply responses at a parametric margin (market regime).
double shp_supply(const MarketCalibration& cal, double margin, double capacity, bool* bound) {
    double q = margin / (2.0 * cal.theta);
    if (q <= 0.0) {
        *bound = false;
        return 0.0;
    }
    if (q >= capacity) {
        *bound = true;
        return capacity;
    }
    *bound = false;
    return q;
}

double chpe_supply(const MarketCalibration& cal, double y, double margin, double capacity,
                   bool* bound, bool* out_of_market) {
    double rho_y = cal.rho * y;
    *bound = false;
    *out_of_market = false;
    if (margin <= 0.0) {
        *out_of_market = true;
        return 0.0;
    }
    if (rho_y == 0.0 || margin >= rho_y) {
        // marginal investment cost below the margin everywhere: expand to the cap
        *bound = true;
        return capacity;
    }
    double q = rho_y / margin - 1.0;
    if (q >= capacity) {
        *bound = true;
        return capacity;
    }
    return std::fmax(q, 0.0);
}

struct CournotCandidate {
    double q_tot = 0.0;
    double q_shp = 0.0;
    double q_chpe = 0.0;
    bool shp_bound = false;
    bool chpe_bound = false;
    bool chpe_out = false;
    bool shp_out = false;
    double total_profit = 0.0;
};

/// Consistency of a joint point with the stationarity system and the
/// complementarity conditions at the bounds.
bool consistent(const MarketCalibration& cal, const ChannelCurve& cs, const ChannelCurve& cc,
                double y, CournotCandidate& cand, double tol) {
    double q_tot = cand.q_shp + cand.q_chpe;
    cand.q_tot = q_tot;
    double m_s = cs.margin_at(q_tot);
    double m_c = cc.margin_at(q_tot);
    double rho_y = cal.rho * y;

    // SHP side
    if (cand.shp_out) {
        if (m_s > tol) return false;
    } else if (cand.shp_bound) {
        if (m_s < mc_shp(cal, cs.capacity) - tol) return false;
    } else {
        if (foc_residual_rel(m_s, mc_shp(cal, cand.q_shp)) > 1e-7) return false;
        if (cand.q_shp < 0.0 || cand.q_shp > cs.capacity) return false;
    }
    // CHPE side
    if (cand.chpe_out) {
        if (m_c > rho_y + tol) return false;  // entry profitable at the margin
    } else if (cand.chpe_bound) {
        if (m_c < mc_chpe(cal, y, cc.capacity) - tol) return false;
    } else {
        if (foc_residual_rel(m_c, mc_chpe(cal, y, cand.q_chpe)) > 1e-7) return false;
        if (cand.q_chpe < 0.0 || cand.q_chpe > cc.capacity) return false;
    }

    double pr_s = profit_shp(cal, cs.state->t, cs.type, cs.price_at(q_tot), cand.q_shp);
    double pr_c = profit_chpe(cal, cc.state->t, cc.type, cc.price_at(q_tot), cand.q_chpe, y);
    cand.total_profit = pr_s + pr_c;
    return true;
}

}  // namespace

TypeEquilibrium cournot_equilibrium(const MarketCalibration& cal, const MarketState& state,
                                    HydrogenType i, double y, const SolverSettings& settings) {
    TypeEquilibrium out;
    const bool shp_active = cal.active(i, Producer::shp, state.t);
    const bool chpe_active = cal.active(i, Producer::chpe, state.t);
    ChannelCurve cs = make_curve(cal, state, i, Producer::shp, y);
    ChannelCurve cc = make_curve(cal, state, i, Producer::chpe, y);

    if (!shp_active && !chpe_active) {
        out.degenerate = true;
        return out;
    }
    if (shp_active != chpe_active) {
        // single seller: its own quantity is the total, so the market regime
        // coincides with the own-channel stationary solve
        const ChannelCurve& curve = shp_active ? cs : cc;
        ChannelSolution sol = solve_own_channel(cal, curve, settings);
        (shp_active ? out.shp : out.chpe) = sol;
        (shp_active ? out.chpe : out.shp).price = (shp_active ? cc : cs).choke;
        return out;
    }

    if (settings.mode == SolverSettings::Mode::full) {
        // diagnostic best-response iteration with slope terms, damped
        double qs = 0.25 * std::fmin(cs.capacity, cs.ceiling);
        double qc = 0.25 * std::fmin(cc.capacity, cc.ceiling);
        for (int it = 0; it < settings.max_iterations; ++it) {
            auto prof_s = [&](double q) {
                return profit_shp(cal, state.t, i, cs.price_at(q + qc), q);
            };
            auto prof_c = [&](double q) {
                return profit_chpe(cal, state.t, i, cc.price_at(qs + q), q, y);
            };
            double bs = numeric::golden_max(prof_s, 0.0, std::fmin(cs.capacity, cs.ceiling), 1e-11);
            double bc = numeric::golden_max(prof_c, 0.0, std::fmin(cc.capacity, cc.ceiling), 1e-11);
            double step = std::fmax(std::fabs(bs - qs), std::fabs(bc - qc));
            qs += settings.damping * (bs - qs);
            qc += settings.damping * (bc - qc);
            if (step < settings.tolerance * std::fmax(1.0, qs + qc)) break;
        }
        double q_tot = qs + qc;
        out.shp = solved_channel(cs, qs, cs.price_at(q_tot), mc_shp(cal, qs), false, qs == 0.0);
        out.chpe =
            solved_channel(cc, qc, cc.price_at(q_tot), mc_chpe(cal, y, qc), false, qc == 0.0);
        return out;
    }

    // degenerate market: neither producer covers its cost at the choke
    if (cs.margin_at(0.0) <= 0.0 && cc.margin_at(0.0) <= 0.0) {
        out.degenerate = true;
        out.shp.active = out.chpe.active = true;
        out.shp.shutdown = out.chpe.shutdown = true;
        out.shp.price = cs.choke;
        out.chpe.price = cc.choke;
        return out;
    }

    const double hi_tot =
        std::fmin(cs.capacity + cc.capacity,
                  std::fmax(cs.ceiling, cc.ceiling) * (1.0 + 1e-9));
    const double rho_y = cal.rho * y;
    std::vector<CournotCandidate> candidates;
    auto try_candidate = [&](CournotCandidate cand) {
        double margin_scale = std::fmax(1e-9, std::fabs(cs.margin_at(cand.q_shp + cand.q_chpe)) +
                                                  std::fabs(cc.margin_at(cand.q_shp + cand.q_chpe)));
        if (consistent(cal, cs, cc, y, cand, 1e-9 * std::fmax(1.0, margin_scale))) {
            for (const auto& c : candidates)
                if (std::fabs(c.q_tot - cand.q_tot) < 1e-7 * std::fmax(1.0, hi_tot)) return;
            candidates.push_back(cand);
        }
    };

    // primary path: damped fixed-point iteration on the total quantity
    bool converged = false;
    {
        double q = 0.5 * hi_tot;
        bool sb = false, cb = false, co = false;
        for (int it = 0; it < settings.max_iterations; ++it) {
            double target = shp_supply(cal, cs.margin_at(q), cs.capacity, &sb) +
                            chpe_supply(cal, y, cc.margin_at(q), cc.capacity, &cb, &co);
            double next = (1.0 - settings.damping) * q + settings.damping * target;
            bool small = std::fabs(next - q) < settings.tolerance * std::fmax(1.0, q);
            q = next;
            if (small) {
                converged = true;
                break;
            }
        }
        // polish the fixed point to full precision on its own branch
        if (converged) {
            auto h0 = [&](double q_tot) {
                bool b1, b2, b3;
                return shp_supply(cal, cs.margin_at(q_tot), cs.capacity, &b1) +
                       chpe_supply(cal, y, cc.margin_at(q_tot), cc.capacity, &b2, &b3) - q_tot;
            };
            double lo = q * 0.999 - 1e-9, hi = q * 1.001 + 1e-9;
            if (h0(lo) * h0(hi) < 0.0) q = tight_root(h0, lo, hi);
        }
        CournotCandidate cand;
        cand.q_shp = shp_supply(cal, cs.margin_at(q), cs.capacity, &cand.shp_bound);
        cand.q_chpe =
            chpe_supply(cal, y, cc.margin_at(q), cc.capacity, &cand.chpe_bound, &cand.chpe_out);
        cand.shp_out = cand.q_shp == 0.0 && !cand.shp_bound;
        try_candidate(cand);
    }


    // branch hunt: the CHPE-interior family is parameterized by the CHPE
    // quantity itself (its stationarity margin is hyperbolic, so the root
    // can sit within a sliver of the total-quantity axis); the remaining
    // bound combinations are monotone 1-D problems in the total. The hunt
    // always runs so the tie-break sees every stationary point.
    {
        auto shp_clamped = [&](double q_tot, bool* bound, bool* out) {
            double m = cs.margin_at(q_tot);
            double q = m / (2.0 * cal.theta);
            *bound = false;
            *out = false;
            if (q <= 0.0) {
                *out = true;
                return 0.0;
            }
            if (q >= cs.capacity) {
                *bound = true;
                return cs.capacity;
            }
            return q;
        };

        // CHPE interior: x_c = c + mc(q_c)/(1-d), total clears on the CHPE
        // curve at that price, SHP supplies against the same total
        {
            double qc_hi = std::fmin(cc.capacity, cc.ceiling * (1.0 - 1e-12));
            auto residual = [&](double q_c) {
                double x_c = cc.cost + mc_chpe(cal, y, q_c) / (1.0 - cc.commission);
                double q_tot = demand(cal, state, i, Producer::chpe, x_c, cc.y);
                bool b = false, o = false;
                double q_s = shp_clamped(q_tot, &b, &o);
                return q_tot - q_s - q_c;
            };
            for (double q_c : scan_roots(residual, 0.0, qc_hi, 512)) {
                double x_c = cc.cost + mc_chpe(cal, y, q_c) / (1.0 - cc.commission);
                double q_tot = demand(cal, state, i, Producer::chpe, x_c, cc.y);
                CournotCandidate cand;
                cand.q_chpe = q_c;
                cand.q_shp = shp_clamped(q_tot, &cand.shp_bound, &cand.shp_out);
                try_candidate(cand);
            }
        }

        // CHPE out of the market or at capacity: total solves
        // q_s(q_tot) + q_c_fixed = q_tot, decreasing in the total
        for (double q_c_fixed : {0.0, cc.capacity}) {
            auto h = [&](double q_tot) {
                bool b = false, o = false;
                return shp_clamped(q_tot, &b, &o) + q_c_fixed - q_tot;
            };
            double lo = 1e-12 * hi_tot, hi = hi_tot;
            if (h(lo) <= 0.0) {
                // no positive total on this branch; candidate at the corner
                CournotCandidate cand;
                cand.q_chpe = q_c_fixed;
                cand.q_shp = 0.0;
                cand.shp_out = true;
                cand.chpe_out = q_c_fixed == 0.0;
                cand.chpe_bound = q_c_fixed > 0.0;
                try_candidate(cand);
                continue;
            }
            if (h(hi) < 0.0) {
                double root = tight_root(h, lo, hi);
                CournotCandidate cand;
                cand.q_chpe = q_c_fixed;
                cand.q_shp = shp_clamped(root, &cand.shp_bound, &cand.shp_out);
                cand.chpe_out = q_c_fixed == 0.0;
                cand.chpe_bound = q_c_fixed > 0.0;
                try_candidate(cand);
            }
        }
    }

    if (candidates.empty()) {
        std::ostringstream os;
        os << "cournot_equilibrium(" << name(i) << ", t=" << state.t
           << "): no consistent stationary point; last scan width " << hi_tot;
        throw SolverError(os.str());
    }
    const CournotCandidate* best = &candidates.front();
    for (const auto& c : candidates)
        if (c.total_profit > best->total_profit) best = &c;

    double q_tot = best->q_tot;
    out.shp = solved_channel(cs, best->q_shp, cs.price_at(q_tot), mc_shp(cal, best->q_shp),
                             best->shp_bound, best->shp_out);
    out.chpe = solved_channel(cc, best->q_chpe, cc.price_at(q_tot),
                              mc_chpe(cal, y, best->q_chpe), best->chpe_bound, best->chpe_out);
    out.shp.root_multiplicity = out.chpe.root_multiplicity =
        static_cast<int>(candidates.size());
    return out;
}

TypeEquilibrium collusion_optimum(const MarketCalibration& cal, const MarketState& state,
                                  HydrogenType i, double y, const SolverSettings& settings) {
    TypeEquilibrium out;
    ChannelCurve cs = make_curve(cal, state, i, Producer::shp, y);
    ChannelCurve cc = make_curve(cal, state, i, Producer::chpe, y);
    bool any = false;
    if (cal.active(i, Producer::shp, state.t)) {
        out.shp = solve_own_channel(cal, cs, settings);
        any = true;
    } else {
        out.shp.price = cs.choke;
    }
    if (cal.active(i, Producer::chpe, state.t)) {
        out.chpe = solve_own_channel(cal, cc, settings);
        any = true;
    } else {
        out.chpe.price = cc.choke;
    }
    out.degenerate = !any || (out.shp.shutdown && out.chpe.shutdown);
    return out;
}

namespace {

double chpe_period_profit(const MarketCalibration& cal, const MarketState& state, Regime regime,
                          double y, const SolverSettings& settings) {
    double total = 0.0;
    for (auto i : kAllTypes) {
        if (!cal.active(i, Producer::chpe, state.t)) continue;
        TypeEquilibrium eq = (regime == Regime::ct)
                                 ? cournot_equilibrium(cal, state, i, y, settings)
                                 : collusion_optimum(cal, state, i, y, settings);
        total += profit_chpe(cal, state.t, i, eq.chpe.price, eq.chpe.quantity, y);
    }
    return total;
}

}  // namespace

LeadTimeSolution optimal_lead_reduction(const MarketCalibration& cal, const MarketState& state,
                                        Regime regime, const SolverSettings& settings) {
    LeadTimeSolution out;
    double lt = cal.lead_time_of(Producer::chpe);
    bool chpe_anywhere = false;
    for (auto i : kAllTypes) chpe_anywhere = chpe_anywhere || cal.active(i, Producer::chpe, state.t);
    if (!chpe_anywhere) return out;

    auto objective = [&](double y) -> double {
        try {
            return chpe_period_profit(cal, state, regime, y, settings);
        } catch (const std::exception&) {
            return -std::numeric_limits<double>::infinity();
        }
    };

    const int n = 16;
    double best_y = 0.0, best_v = objective(0.0);
    for (int k = 1; k <= n; ++k) {
        double yk = lt * static_cast<double>(k) / n;
        double v = objective(yk);
        if (v > best_v) {
            best_v = v;
            best_y = yk;
        }
    }
    double lo = std::fmax(0.0, best_y - lt / n);
    double hi = std::fmin(lt, best_y + lt / n);
    double y = numeric::golden_max(objective, lo, hi, 1e-7, 160);
    if (objective(best_y) > objective(y)) y = best_y;

    out.y = y;
    out.boundary = y < 1e-7 * lt || y > lt * (1.0 - 1e-7);
    if (!out.boundary) {
        double h = 1e-5 * lt;
        double d1 = (objective(y + h) - objective(y - h)) / (2.0 * h);
        double scale = std::fmax(1.0, std::fabs(2.0 * cal.gamma * (lt - y - cal.tau)) +
                                          std::fabs(cal.rho));
        out.stationarity_residual = std::fabs(d1) / scale;
    }
    return out;
}

RegimeOutcome regime_outcome(const MarketCalibration& cal, const MarketState& state,
                             Regime regime, const SolverSettings& settings) {
    if (regime == Regime::co)
        throw std::invalid_argument("regime_outcome: co is assembled by the scenario engine");
    RegimeOutcome out;
    out.regime = regime;
    out.t = state.t;
    out.penetration = state.r;

    LeadTimeSolution lead{};
    if (cal.lead_time_of(Producer::chpe) > cal.tau)
        lead = optimal_lead_reduction(cal, state, regime, settings);
    out.y = lead.y;
    out.y_boundary = lead.boundary;

    std::array<std::array<double, kNumProducers>, kNumTypes> quantities{};
    std::vector<ChannelOutcome> hub_channels;
    for (auto i : kAllTypes) {
        try {
            out.eq[index(i)] = (regime == Regime::ct)
                                   ? cournot_equilibrium(cal, state, i, out.y, settings)
                                   : collusion_optimum(cal, state, i, out.y, settings);
        } catch (const std::exception& e) {
            out.errors[index(i)] = e.what();
            continue;
        }
        const TypeEquilibrium& eq = out.eq[index(i)];
        quantities[index(i)][index(Producer::shp)] = eq.shp.quantity;
        quantities[index(i)][index(Producer::chpe)] = eq.chpe.quantity;

        PricedChannel ps{eq.shp.price, eq.shp.quantity > 0.0};
        PricedChannel pc{eq.chpe.price, eq.chpe.quantity > 0.0};
        out.avg_price[index(i)] = average_price(ps, pc);

        MemberProfits& tp = out.profits_by_type[index(i)];
        if (cal.active(i, Producer::shp, state.t))
            tp.shp = profit_shp(cal, state.t, i, eq.shp.price, eq.shp.quantity);
        if (cal.active(i, Producer::chpe, state.t))
            tp.chpe = profit_chpe(cal, state.t, i, eq.chpe.price, eq.chpe.quantity, out.y);
        std::vector<ChannelOutcome> type_channels;
        if (eq.shp.quantity > 0.0)
            type_channels.push_back(
                {eq.shp.price, eq.shp.quantity, cal.cost_at(i, Producer::shp, state.t)});
        if (eq.chpe.quantity > 0.0)
            type_channels.push_back(
                {eq.chpe.price, eq.chpe.quantity, cal.cost_at(i, Producer::chpe, state.t)});
        tp.hub = profit_hub(cal, state.t, type_channels);
        out.profits += tp;
        hub_channels.insert(hub_channels.end(), type_channels.begin(), type_channels.end());
    }

    double total = 0.0;
    for (auto i : kAllTypes)
        for (auto j : kAllProducers) total += quantities[index(i)][index(j)];
    out.w = total > 0.0 ? green_share(quantities) : 0.0;
    return out;
}

ClosedFormResult closed_form_crosscheck(const MarketCalibration& cal, const MarketState& state,
                                        HydrogenType i, double y,
                                        const ClosedFormConstants& constants,
                                        const TypeEquilibrium& numeric_reference) {
    // Evaluates the stationary-quantity closed forms as printed, with the
    // supplementary constants supplied by the caller. Diagnostic only.
    ClosedFormResult out;
    int t = state.t;
    double qv = std::pow(cal.q_at(t), cal.vartheta);
    double s1 = cal.s1_of(i), s2 = cal.s2_of(i), d0 = cal.d0_of(i);
    double one_minus_d = 1.0 - cal.delta_at(t);
    double lt_s = cal.lead_time_of(Producer::shp);
    double lt_c = cal.lead_time_of(Producer::chpe);
    double floor = demand_floor(cal, state, i);

    double n_s = (s1 / qv) * std::pow(2.0 * cal.theta / one_minus_d +
                                          cal.cost_at(i, Producer::shp, t),
                                      cal.vartheta + 1.0) -
                 (s2 / s1) * qv * (lt_s / cal.tau) - std::log(d0) + constants.eps1;
    out.q_shp = floor + std::exp(n_s / (s1 / qv));

    double base_c = (cal.cost_at(i, Producer::chpe, t) - cal.rho * y) / one_minus_d;
    double n_c = std::pow(base_c, cal.vartheta + 1.0) +
                 (s2 / s1) * qv * ((lt_c - y) / cal.tau) - std::log(d0) + constants.eps2;
    out.q_chpe = floor + std::exp(n_c / (qv / s1));

    double f1 = constants.use_supplied_f1
                    ? constants.f1
                    : (qv / s1) * std::log(std::fmax(
                          (numeric_reference.chpe.quantity - floor) / d0, kChokeRelative));
    double k_inner = -(s2 / s1) * qv * (lt_c / cal.tau - 1.0) - f1;
    double expo = -cal.vartheta / (cal.vartheta + 1.0);
    double k_pow = std::pow(k_inner, expo);
    double numer = lt_c - cal.tau -
                   (1.0 / (2.0 * cal.gamma)) *
                       (constants.d1 * k_pow -
                        cal.rho * std::log1p(numeric_reference.chpe.quantity));
    double denom = 1.0 + (1.0 / (2.0 * cal.gamma)) *
                             (constants.d1 * ((s2 / s1) * qv) * expo * k_pow);
    out.y = numer / denom;

    out.q_shp_rel_gap = numeric::rel_diff(out.q_shp, numeric_reference.shp.quantity);
    out.q_chpe_rel_gap = numeric::rel_diff(out.q_chpe, numeric_reference.chpe.quantity);
    out.diverged = !(std::isfinite(out.q_shp) && std::isfinite(out.q_chpe)) ||
                   out.q_shp_rel_gap > 1e-6 || out.q_chpe_rel_gap > 1e-6;
    return out;
}

}  // namespace h2market
