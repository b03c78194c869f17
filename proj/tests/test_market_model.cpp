#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "h2market/market_model.hpp"
#include "h2market/numeric.hpp"
#include "support/test_oracle.hpp"

using namespace h2market;

namespace {

/// Single-type fixture matching the documented scalar example.
MarketCalibration example_cal() {
    MarketCalibration cal;
    cal.horizon = 1;
    cal.theta = 0.0002;
    cal.gamma = 25.0;
    cal.rho = 1.0;
    cal.tau = 2.0;
    cal.beta = 0.05;
    cal.vartheta = 0.05;
    cal.r0 = 0.10;
    cal.q = {2.25};
    cal.rl = {0.01};
    cal.alpha = {0.1};
    cal.delta = {0.05};
    for (auto i : kAllTypes) {
        cal.b[index(i)] = {0.003};
        cal.d0[index(i)] = 1000.0;
        cal.s1[index(i)] = 0.2;
        cal.s2[index(i)] = 0.05;
        for (auto j : kAllProducers) {
            cal.cost[index(i)][index(j)] = {2.0};
            cal.capacity[index(i)][index(j)] = {5000.0};
        }
    }
    cal.lead_time = {5.0, 2.0};  // chpe, shp
    return cal;
}

}  // namespace

TEST_CASE("demand: closed-form limits and the pinned scalar value") {
    MarketCalibration cal = example_cal();
    MarketState st{0, 0.10, false};

    SUBCASE("zero lead-time sensitivity, zero price") {
        cal.s2[index(HydrogenType::green)] = 0.0;
        double d = demand(cal, st, HydrogenType::green, Producer::shp, 0.0, 0.0);
        CHECK(d == doctest::Approx(1000.0 * (0.05 * 0.10 + 1.0)).epsilon(1e-14));
    }
    SUBCASE("no penetration floor, price to infinity") {
        cal.beta = 0.0;
        double d = demand(cal, st, HydrogenType::green, Producer::shp, 1e4, 0.0);
        CHECK(d < 1e-9);
    }
    SUBCASE("pinned regression value") {
        // d0=1000, beta=0.05, r=0.10, s1=0.2, s2=0.05, vt=0.05, q=2.25,
        // lt=2, y=0, tau=2, price=2.5; value frozen from direct evaluation
        double d = demand(cal, st, HydrogenType::green, Producer::shp, 2.5, 0.0);
        CHECK(d == doctest::Approx(580.42811746414363).epsilon(1e-12));
    }
    SUBCASE("domain errors") {
        CHECK_THROWS_AS((void)demand(cal, st, HydrogenType::green, Producer::shp, -1.0, 0.0),
                        std::domain_error);
        CHECK_THROWS_AS((void)demand(cal, st, HydrogenType::green, Producer::chpe, 1.0, 9.0),
                        std::domain_error);
    }
}

TEST_CASE("demand is strictly decreasing in price and effective lead time") {
    numeric::SplitMix64 rng(0x5eed0001);
    for (int k = 0; k < 1000; ++k) {
        MarketCalibration cal = testsupport::random_calibration(rng);
        MarketState st{0, cal.r0, false};
        auto i = kAllTypes[k % kNumTypes];
        double x = rng.uniform(0.1, 8.0);
        double dx = rng.uniform(0.01, 0.5);
        double y1 = rng.uniform(0.0, cal.lead_time_of(Producer::chpe) * 0.5);
        double y2 = y1 + rng.uniform(0.01, 0.4);

        double d_low = demand(cal, st, i, Producer::chpe, x, y1);
        double d_high_price = demand(cal, st, i, Producer::chpe, x + dx, y1);
        double d_short_lead = demand(cal, st, i, Producer::chpe, x, y2);
        CHECK(d_high_price < d_low);
        CHECK(d_short_lead > d_low);  // larger reduction => shorter lead => more demand

        // output always lies in (d0*beta*r, d0*(beta*r + 1)]
        CHECK(d_low > demand_floor(cal, st, i));
        CHECK(d_low <= cal.d0_of(i) * (cal.beta * st.r + 1.0));
    }
}

TEST_CASE("inverse demand: band endpoints and round trip") {
    MarketCalibration cal = example_cal();
    MarketState st{0, 0.10, false};
    auto i = HydrogenType::blue;

    SUBCASE("upper band endpoint clears at price zero") {
        double top = demand_ceiling(cal, st, i, Producer::shp, 0.0);
        CHECK(inverse_demand(cal, st, i, Producer::shp, top, 0.0) ==
              doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("choke limit near the floor") {
        double floor = demand_floor(cal, st, i);
        double p = inverse_demand(cal, st, i, Producer::shp, floor * (1.0 + 1e-9), 0.0);
        CHECK(p > choke_price(cal, st, i, Producer::shp, 0.0) * 0.8);
        CHECK_THROWS_AS((void)inverse_demand(cal, st, i, Producer::shp, floor, 0.0),
                        std::domain_error);
        CHECK_THROWS_AS(
            (void)inverse_demand(cal, st, i, Producer::shp,
                                 demand_ceiling(cal, st, i, Producer::shp, 0.0) * 1.01, 0.0),
            std::domain_error);
    }
    SUBCASE("round trip against the forward definition") {
        numeric::SplitMix64 rng(0x5eed0002);
        for (int k = 0; k < 2000; ++k) {
            MarketCalibration rc = testsupport::random_calibration(rng);
            MarketState rs{0, rc.r0, false};
            auto type = kAllTypes[k % kNumTypes];
            auto producer = (k % 2) ? Producer::shp : Producer::chpe;
            double y = producer == Producer::chpe
                           ? rng.uniform(0.0, rc.lead_time_of(Producer::chpe))
                           : 0.0;
            double floor = demand_floor(rc, rs, type);
            double top = demand_ceiling(rc, rs, type, producer, y);
            double q = floor + (top - floor) * rng.uniform(1e-6, 0.999999);
            double price = inverse_demand(rc, rs, type, producer, q, y);
            double back = demand(rc, rs, type, producer, price, y);
            CHECK(numeric::rel_diff(back, q) < 1e-9);
            // and the price itself agrees with bisection on the forward curve
            double p_ref = testsupport::price_ref(rc, rs, type, producer, q, y);
            CHECK(std::fabs(price - p_ref) < 1e-6 * std::fmax(1.0, p_ref));
        }
    }
}

TEST_CASE("average price") {
    CHECK(average_price(2.0, 4.0) == 3.0);
    CHECK(average_price(3.7, 3.7) == 3.7);
    // a type sold by one producer returns that producer's price
    PricedChannel shp{0.0, false};
    PricedChannel chpe{1.54, true};
    auto avg = average_price(shp, chpe);
    REQUIRE(avg.has_value());
    CHECK(*avg == 1.54);
    CHECK_FALSE(average_price(PricedChannel{}, PricedChannel{}).has_value());
}

TEST_CASE("penetration step") {
    MarketCalibration cal = example_cal();
    std::array<std::optional<double>, kNumTypes> prices{1.0, 1.0, 1.0};
    std::span<const std::optional<double>> span(prices.data(), prices.size());

    SUBCASE("full diminishing wipes the state") {
        cal.rl = {1.0};
        MarketState st{0, 0.3, false};
        CHECK(penetration_step(cal, st, 0.5, span).r == 0.0);
    }
    SUBCASE("unit prices and zero green share decay geometrically") {
        cal.rl = {0.25};
        MarketState st{0, 0.2, false};
        auto next = penetration_step(cal, st, 0.0, span);
        CHECK(next.r == doctest::Approx((1.0 - 0.25) * 0.2).epsilon(1e-15));
        CHECK(next.t == 1);
        CHECK_FALSE(next.clamped);
    }
    SUBCASE("affine in w with slope (1-rl)*alpha") {
        cal.rl = {0.1};
        cal.alpha = {0.37};
        MarketState st{0, 0.2, false};
        double r0 = penetration_step(cal, st, 0.0, span).r;
        double r1 = penetration_step(cal, st, 1.0, span).r;
        CHECK(r1 - r0 == doctest::Approx((1.0 - 0.1) * 0.37).epsilon(1e-14));
    }
    SUBCASE("negative update clamps to zero with a flag") {
        cal.b[index(HydrogenType::green)] = {5.0};
        std::array<std::optional<double>, kNumTypes> expensive{100.0, 100.0, 100.0};
        MarketState st{0, 0.05, false};
        auto next = penetration_step(
            cal, st, 0.0, std::span<const std::optional<double>>(expensive.data(), 3));
        CHECK(next.r == 0.0);
        CHECK(next.clamped);
    }
    SUBCASE("non-positive average price is a domain error") {
        std::array<std::optional<double>, kNumTypes> bad{1.0, 0.0, 1.0};
        MarketState st{0, 0.1, false};
        CHECK_THROWS_AS(
            (void)penetration_step(cal, st, 0.0,
                                   std::span<const std::optional<double>>(bad.data(), 3)),
            std::domain_error);
    }
    SUBCASE("a disengaged type contributes no term") {
        std::array<std::optional<double>, kNumTypes> partial{1.0, std::nullopt, 1.0};
        MarketState st{0, 0.1, false};
        auto next = penetration_step(
            cal, st, 0.0, std::span<const std::optional<double>>(partial.data(), 3));
        CHECK(next.r == doctest::Approx((1.0 - 0.01) * 0.1).epsilon(1e-14));
    }
}

TEST_CASE("green share") {
    std::array<std::array<double, kNumProducers>, kNumTypes> q{};
    SUBCASE("all green") {
        q[index(HydrogenType::green)][index(Producer::shp)] = 10.0;
        CHECK(green_share(q) == 1.0);
    }
    SUBCASE("no green") {
        q[index(HydrogenType::grey)][index(Producer::chpe)] = 10.0;
        CHECK(green_share(q) == 0.0);
    }
    SUBCASE("documented 60/38/2 split of 500000 t") {
        q[index(HydrogenType::grey)][index(Producer::chpe)] = 300000.0;
        q[index(HydrogenType::blue)][index(Producer::chpe)] = 190000.0;
        q[index(HydrogenType::green)][index(Producer::shp)] = 10000.0;
        CHECK(green_share(q) == doctest::Approx(0.02).epsilon(1e-15));
    }
    SUBCASE("zero total is a domain error") {
        CHECK_THROWS_AS((void)green_share(q), std::domain_error);
    }
}

TEST_CASE("profit functions") {
    MarketCalibration cal = example_cal();
    auto i = HydrogenType::green;

    SUBCASE("zero quantity earns nothing for the quadratic-cost producer") {
        CHECK(profit_shp(cal, 0, i, 3.0, 0.0) == 0.0);
    }
    SUBCASE("full commission leaves only the quadratic cost") {
        cal.delta = {1.0};
        CHECK(profit_shp(cal, 0, i, 3.0, 400.0) ==
              doctest::Approx(-cal.theta * 400.0 * 400.0).epsilon(1e-14));
    }
    SUBCASE("stationarity value: price c + 2*theta*Q/(1-delta) earns theta*Q^2") {
        double q = 5000.0;
        double price = 2.0 + 2.0 * cal.theta * q / (1.0 - cal.delta_at(0));
        CHECK(profit_shp(cal, 0, i, price, q) ==
              doctest::Approx(cal.theta * q * q).epsilon(1e-12));
    }
    SUBCASE("delivery terms vanish at q=0 with lead time driven to the norm") {
        // lt=5, tau=2, y=3 zeroes the delivery penalty
        CHECK(profit_chpe(cal, 0, i, 2.0, 0.0, 3.0) == 0.0);
        CHECK(profit_chpe(cal, 0, i, 2.0, 0.0, 0.0) ==
              doctest::Approx(-cal.gamma * 9.0).epsilon(1e-14));
    }
    SUBCASE("hub profit") {
        std::array<ChannelOutcome, 2> channels{{{3.0, 100.0, 2.0}, {2.5, 50.0, 2.5}}};
        double expected = cal.delta_at(0) * ((3.0 - 2.0) * 100.0 + 0.0);
        CHECK(profit_hub(cal, 0, channels) == doctest::Approx(expected).epsilon(1e-14));
        cal.delta = {0.0};
        CHECK(profit_hub(cal, 0, channels) == 0.0);
    }
    SUBCASE("hub profit equals commission share of gross margin at inverse-demand prices") {
        MarketState st{0, 0.1, false};
        double q = 420.0;
        double price = inverse_demand(cal, st, i, Producer::shp, q, 0.0);
        std::array<ChannelOutcome, 1> ch{{{price, q, cal.cost_at(i, Producer::shp, 0)}}};
        double margin = (price - 2.0) * q;
        CHECK(profit_hub(cal, 0, ch) == doctest::Approx(0.05 * margin).epsilon(1e-12));
    }
}

TEST_CASE("member profits decompose into channel surplus minus the cost terms") {
    // summing the three member profits cancels the commission: total =
    // gross margins - theta*Q_s^2 - gamma*(lt-y-tau)^2 - rho*y*ln(Q_c+1)
    MarketCalibration cal = example_cal();
    MarketState st{0, 0.1, false};
    auto i = HydrogenType::blue;
    double y = 1.3;
    double q_s = 300.0, q_c = 700.0;
    double x_s = inverse_demand(cal, st, i, Producer::shp, q_s, 0.0);
    double x_c = inverse_demand(cal, st, i, Producer::chpe, q_c, y);

    double pi_s = profit_shp(cal, 0, i, x_s, q_s);
    double pi_c = profit_chpe(cal, 0, i, x_c, q_c, y);
    std::array<ChannelOutcome, 2> ch{{{x_s, q_s, 2.0}, {x_c, q_c, 2.0}}};
    double pi_h = profit_hub(cal, 0, ch);

    double lt = cal.lead_time_of(Producer::chpe);
    double expected = (x_s - 2.0) * q_s + (x_c - 2.0) * q_c - cal.theta * q_s * q_s -
                      cal.gamma * (lt - y - cal.tau) * (lt - y - cal.tau) -
                      cal.rho * y * std::log1p(q_c);
    CHECK(pi_s + pi_c + pi_h == doctest::Approx(expected).epsilon(1e-12));
}
