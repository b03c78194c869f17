#include "h2market/contracts.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "h2market/numeric.hpp"

namespace h2market {

double phi_shp(const MarketCalibration& cal, int t, HydrogenType i, double x_co, double q_co) {
    if (q_co == 0.0) throw std::domain_error("phi_shp: cooperative quantity is zero");
    double d = cal.delta_at(t);
    double c = cal.cost_at(i, Producer::shp, t);
    return (c - (1.0 - d) * x_co + d * c) / (2.0 * cal.theta * q_co);
}

std::optional<double> phi_chpe(const MarketCalibration& cal, int t, HydrogenType i, double x_co,
                               double q_co, double y_cn) {
    if (y_cn == 0.0) return std::nullopt;  // no investment, nothing to share
    double d = cal.delta_at(t);
    double c = cal.cost_at(i, Producer::chpe, t);
    return 1.0 - (1.0 - d) * (x_co - c) * std::log1p(q_co) / (cal.rho * y_cn);
}

namespace {

/// Contract-side adjustments relative to the plain per-type profits at the
/// cooperative decisions: the hub absorbs phi-shares of the two cost terms.
double shp_share_value(const MarketCalibration& cal, double phi, double q) {
    return phi * cal.theta * q * q;
}

double chpe_share_value(const MarketCalibration& cal, std::optional<double> phi_prime, double y,
                        double q) {
    if (!phi_prime.has_value()) return 0.0;
    return *phi_prime * cal.rho * y * std::log1p(q);
}

MemberProfits plain_profits(const MarketCalibration& cal, int t, HydrogenType i,
                            const TypeEquilibrium& eq, double y) {
    MemberProfits p;
    p.shp = profit_shp(cal, t, i, eq.shp.price, eq.shp.quantity);
    p.chpe = profit_chpe(cal, t, i, eq.chpe.price, eq.chpe.quantity, y);
    std::vector<ChannelOutcome> channels;
    if (eq.shp.quantity > 0.0)
        channels.push_back({eq.shp.price, eq.shp.quantity, cal.cost_at(i, Producer::shp, t)});
    if (eq.chpe.quantity > 0.0)
        channels.push_back({eq.chpe.price, eq.chpe.quantity, cal.cost_at(i, Producer::chpe, t)});
    p.hub = profit_hub(cal, t, channels);
    return p;
}

}  // namespace

MemberProfits coordinated_profits(const MarketCalibration& cal, int t, HydrogenType i,
                                  const CoordinationContract& contract,
                                  const TypeEquilibrium& cn, double y_cn) {
    MemberProfits base = plain_profits(cal, t, i, cn, y_cn);
    double s_shp = shp_share_value(cal, contract.phi_shp, cn.shp.quantity);
    double s_chpe = chpe_share_value(cal, contract.phi_chpe, y_cn, cn.chpe.quantity);
    MemberProfits out;
    out.shp = base.shp + s_shp - contract.omega_shp;
    out.chpe = base.chpe + s_chpe - contract.omega_chpe;
    out.hub = base.hub - s_shp - s_chpe + contract.omega_shp + contract.omega_chpe;
    return out;
}

LumpSumBounds lump_sum_bounds(const MarketCalibration& cal, int t, HydrogenType i,
                              const MemberProfits& ct_profits, const TypeEquilibrium& cn,
                              double y_cn, double phi, std::optional<double> phi_prime) {
    MemberProfits base = plain_profits(cal, t, i, cn, y_cn);
    double s_shp = shp_share_value(cal, phi, cn.shp.quantity);
    double s_chpe = chpe_share_value(cal, phi_prime, y_cn, cn.chpe.quantity);
    // profits are affine in the lump sums: shp = A_s - w, chpe = A_c - w',
    // hub = A_h + w + w'
    double a_s = base.shp + s_shp;
    double a_c = base.chpe + s_chpe;
    double a_h = base.hub - s_shp - s_chpe;
    double w_max = a_s - ct_profits.shp;
    double wp_max = a_c - ct_profits.chpe;
    double sum_min = ct_profits.hub - a_h;
    LumpSumBounds out;
    out.omega_shp = {sum_min - wp_max, w_max};
    out.omega_chpe = {sum_min - w_max, wp_max};
    return out;
}

SurplusAllocation allocate_surplus(const MemberProfits& ct_profits,
                                   const MemberProfits& cn_profits,
                                   const BargainingPowers& powers) {
    if (!(powers.sum() > 0.0) || powers.shp < 0.0 || powers.chpe < 0.0 || powers.hub < 0.0)
        throw std::domain_error("allocate_surplus: bargaining powers must be non-negative with a positive sum");
    SurplusAllocation out;
    out.delta_pi = cn_profits.total() - ct_profits.total();
    double z = powers.sum();
    out.shp = out.delta_pi * powers.shp / z;
    out.chpe = out.delta_pi * powers.chpe / z;
    out.hub = out.delta_pi * powers.hub / z;
    return out;
}

LumpSums lump_sums(const MarketCalibration& cal, int t, HydrogenType i,
                   const MemberProfits& ct_profits, const MemberProfits& cn_profits,
                   const TypeEquilibrium& cn, double y_cn, double phi,
                   std::optional<double> phi_prime, const BargainingPowers& powers) {
    SurplusAllocation share = allocate_surplus(ct_profits, cn_profits, powers);
    // reconstruction identities: each producer ends at its disagreement
    // profit plus its surplus share
    LumpSums out;
    out.omega_shp = cn_profits.shp - ct_profits.shp +
                    shp_share_value(cal, phi, cn.shp.quantity) - share.shp;
    out.omega_chpe = cn_profits.chpe - ct_profits.chpe +
                     chpe_share_value(cal, phi_prime, y_cn, cn.chpe.quantity) - share.chpe;

    LumpSumBounds bounds = lump_sum_bounds(cal, t, i, ct_profits, cn, y_cn, phi, phi_prime);
    const double slack = 1e-9 * (1.0 + std::fabs(ct_profits.total()) + std::fabs(cn_profits.total()));
    if (bounds.feasible()) {
        bool inside = out.omega_shp >= bounds.omega_shp.lo - slack &&
                      out.omega_shp <= bounds.omega_shp.hi + slack &&
                      out.omega_chpe >= bounds.omega_chpe.lo - slack &&
                      out.omega_chpe <= bounds.omega_chpe.hi + slack;
        if (!inside) {
            std::ostringstream os;
            os << "lump_sums(" << name(i) << ", t=" << t
               << "): computed sums violate their feasibility intervals";
            throw InfeasibleCoordination(os.str());
        }
    }
    return out;
}

CoordinationContract make_contract(const MarketCalibration& cal, int t, HydrogenType i,
                                   const MemberProfits& ct_profits,
                                   const MemberProfits& cn_profits, const TypeEquilibrium& cn,
                                   double y_cn, const BargainingPowers& powers) {
    CoordinationContract c;
    if (cn.shp.quantity > 0.0) c.phi_shp = phi_shp(cal, t, i, cn.shp.price, cn.shp.quantity);
    c.phi_chpe = phi_chpe(cal, t, i, cn.chpe.price, cn.chpe.quantity, y_cn);
    LumpSums sums =
        lump_sums(cal, t, i, ct_profits, cn_profits, cn, y_cn, c.phi_shp, c.phi_chpe, powers);
    c.omega_shp = sums.omega_shp;
    c.omega_chpe = sums.omega_chpe;
    return c;
}

}  // namespace h2market
