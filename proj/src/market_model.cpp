#include "h2market/market_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace h2market {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::domain_error(msg);
}

double price_exponent(const MarketCalibration& cal, HydrogenType i, int t, double price) {
    // (s1 / q^vt) * price^(vt+1)
    double qv = std::pow(cal.q_at(t), cal.vartheta);
    return cal.s1_of(i) / qv * std::pow(price, cal.vartheta + 1.0);
}

}  // namespace

double effective_lead_time(const MarketCalibration& cal, Producer j, double y) {
    double reduction = (j == Producer::chpe) ? y : 0.0;
    return std::fmax(cal.lead_time_of(j) - reduction, 0.0);
}

double demand(const MarketCalibration& cal, const MarketState& state, HydrogenType i, Producer j,
              double price, double y) {
    require(price >= 0.0, "demand: price must be >= 0");
    require(y >= 0.0 && y <= cal.lead_time_of(j), "demand: y outside [0, lead time]");
    double lead = effective_lead_time(cal, j, y);
    double expo = -price_exponent(cal, i, state.t, price) - cal.s2_of(i) * lead / cal.tau;
    return cal.d0_of(i) * (cal.beta * state.r + std::exp(expo));
}

double demand_floor(const MarketCalibration& cal, const MarketState& state, HydrogenType i) {
    return cal.d0_of(i) * cal.beta * state.r;
}

double demand_ceiling(const MarketCalibration& cal, const MarketState& state, HydrogenType i,
                      Producer j, double y) {
    double lead = effective_lead_time(cal, j, y);
    return cal.d0_of(i) *
           (cal.beta * state.r + std::exp(-cal.s2_of(i) * lead / cal.tau));
}

double inverse_demand(const MarketCalibration& cal, const MarketState& state, HydrogenType i,
                      Producer j, double quantity, double y) {
    require(y >= 0.0 && y <= cal.lead_time_of(j), "inverse_demand: y outside [0, lead time]");
    double floor = demand_floor(cal, state, i);
    double ceiling = demand_ceiling(cal, state, i, j, y);
    if (!(quantity > floor && quantity <= ceiling)) {
        std::ostringstream os;
        os << "inverse_demand: quantity " << quantity << " outside the invertible band ("
           << floor << ", " << ceiling << "]";
        throw std::domain_error(os.str());
    }
    double lead = effective_lead_time(cal, j, y);
    double u = quantity / cal.d0_of(i) - cal.beta * state.r;
    double qv = std::pow(cal.q_at(state.t), cal.vartheta);
    double inner = qv / cal.s1_of(i) * (-std::log(u) - cal.s2_of(i) * lead / cal.tau);
    // inner >= 0 exactly on the band; clamp the roundoff at the endpoint
    inner = std::fmax(inner, 0.0);
    return std::pow(inner, 1.0 / (cal.vartheta + 1.0));
}

double choke_price(const MarketCalibration& cal, const MarketState& state, HydrogenType i,
                   Producer j, double y) {
    double lead = effective_lead_time(cal, j, y);
    double qv = std::pow(cal.q_at(state.t), cal.vartheta);
    double inner =
        qv / cal.s1_of(i) * (-std::log(kChokeRelative) - cal.s2_of(i) * lead / cal.tau);
    return std::pow(std::fmax(inner, 0.0), 1.0 / (cal.vartheta + 1.0));
}

double average_price(double x_shp, double x_chpe) {
    require(x_shp >= 0.0 && x_chpe >= 0.0, "average_price: prices must be >= 0");
    return 0.5 * (x_shp + x_chpe);
}

std::optional<double> average_price(const PricedChannel& shp, const PricedChannel& chpe) {
    if (shp.active && chpe.active) return average_price(shp.price, chpe.price);
    if (shp.active) return shp.price;
    if (chpe.active) return chpe.price;
    return std::nullopt;
}

MarketState penetration_step(const MarketCalibration& cal, const MarketState& state, double w,
                             std::span<const std::optional<double>> avg_prices) {
    require(w >= 0.0 && w <= 1.0, "penetration_step: w outside [0, 1]");
    require(avg_prices.size() == kNumTypes, "penetration_step: expected one price per type");
    double price_term = 0.0;
    for (auto i : kAllTypes) {
        const auto& px = avg_prices[index(i)];
        if (!px.has_value()) continue;  // disengaged type contributes nothing
        require(*px > 0.0, "penetration_step: average price must be > 0");
        price_term += cal.b_at(i, state.t) * std::log(*px);
    }
    double next = (1.0 - cal.rl_at(state.t)) * (state.r + cal.alpha_at(state.t) * w - price_term);
    MarketState out;
    out.t = state.t + 1;
    out.clamped = next < 0.0;
    out.r = std::fmax(next, 0.0);
    return out;
}

double green_share(const std::array<std::array<double, kNumProducers>, kNumTypes>& quantities) {
    double total = 0.0;
    for (auto i : kAllTypes)
        for (auto j : kAllProducers) total += quantities[index(i)][index(j)];
    require(total > 0.0, "green_share: total production must be > 0");
    double green = quantities[index(HydrogenType::green)][index(Producer::shp)] +
                   quantities[index(HydrogenType::green)][index(Producer::chpe)];
    return green / total;
}

double profit_shp(const MarketCalibration& cal, int t, HydrogenType i, double price,
                  double quantity) {
    require(quantity >= 0.0, "profit_shp: quantity must be >= 0");
    double margin = (1.0 - cal.delta_at(t)) * (price - cal.cost_at(i, Producer::shp, t));
    return margin * quantity - cal.theta * quantity * quantity;
}

double profit_chpe(const MarketCalibration& cal, int t, HydrogenType i, double price,
                   double quantity, double y) {
    require(quantity >= 0.0, "profit_chpe: quantity must be >= 0");
    require(y >= 0.0 && y <= cal.lead_time_of(Producer::chpe),
            "profit_chpe: y outside [0, lead time]");
    double lt = cal.lead_time_of(Producer::chpe);
    double margin = (1.0 - cal.delta_at(t)) * (price - cal.cost_at(i, Producer::chpe, t));
    double gap = lt - y - cal.tau;
    return margin * quantity - cal.gamma * gap * gap -
           cal.rho * y * std::log1p(quantity);
}

double profit_hub(const MarketCalibration& cal, int t, std::span<const ChannelOutcome> channels) {
    double gross = 0.0;
    for (const auto& ch : channels) gross += (ch.price - ch.unit_cost) * ch.quantity;
    return cal.delta_at(t) * gross;
}

}  // namespace h2market
