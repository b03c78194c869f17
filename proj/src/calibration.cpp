#include "h2market/calibration.hpp"

#include <cmath>
#include <sstream>

namespace h2market {

namespace {

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

void check_series(std::vector<std::string>& out, const std::vector<double>& s, int horizon,
                  const std::string& field, double lo, double hi, bool lo_strict = false,
                  bool hi_strict = false) {
    if (static_cast<int>(s.size()) != horizon) {
        std::ostringstream os;
        os << field << ": expected " << horizon << " periods, got " << s.size();
        out.push_back(os.str());
        return;
    }
    for (std::size_t t = 0; t < s.size(); ++t) {
        double v = s[t];
        bool ok = std::isfinite(v) && (lo_strict ? v > lo : v >= lo) &&
                  (hi_strict ? v < hi : v <= hi);
        if (!ok) {
            std::ostringstream os;
            os << field << "[" << t << "] = " << v << " outside " << (lo_strict ? "(" : "[") << lo
               << ", " << hi << (hi_strict ? ")" : "]");
            out.push_back(os.str());
        }
    }
}

}  // namespace

std::vector<std::string> MarketCalibration::violations() const {
    std::vector<std::string> v;
    if (horizon < 1) v.push_back("horizon: must be at least 1");
    if (!finite_positive(theta)) v.push_back("theta: must be > 0");
    if (!finite_positive(rho)) v.push_back("rho: must be > 0");
    if (!finite_positive(gamma)) v.push_back("gamma: must be > 0");
    if (!finite_positive(tau)) v.push_back("tau: must be > 0");
    if (!(std::isfinite(vartheta) && vartheta > 0.0 && vartheta < 1.0))
        v.push_back("vartheta: must lie in (0, 1)");
    if (!(std::isfinite(r0) && r0 > 0.0 && r0 < 1.0)) v.push_back("r0: must lie in (0, 1)");
    if (!(std::isfinite(beta) && beta >= 0.0)) v.push_back("beta: must be >= 0");
    for (auto i : kAllTypes) {
        if (!finite_positive(d0_of(i)))
            v.push_back(std::string("d0.") + name(i) + ": must be > 0");
        if (!finite_positive(s1_of(i)))
            v.push_back(std::string("s1.") + name(i) + ": must be > 0");
        if (!(std::isfinite(s2_of(i)) && s2_of(i) >= 0.0))
            v.push_back(std::string("s2.") + name(i) + ": must be >= 0");
    }
    for (auto j : kAllProducers) {
        if (!finite_positive(lead_time_of(j)))
            v.push_back(std::string("lead_time.") + name(j) + ": must be > 0");
    }
    if (lead_time[index(Producer::shp)] >= lead_time[index(Producer::chpe)])
        v.push_back("lead_time: shp must be shorter than chpe");

    if (horizon >= 1) {
        check_series(v, q, horizon, "q", 0.0, 1e9, /*lo_strict=*/true);
        check_series(v, rl, horizon, "rl", 0.0, 1.0);
        check_series(v, alpha, horizon, "alpha", 0.0, 1e9);
        check_series(v, delta, horizon, "delta", 0.0, 1.0, false, /*hi_strict=*/true);
        for (auto i : kAllTypes)
            check_series(v, b[index(i)], horizon, std::string("b.") + name(i), 0.0, 1e9);
        for (auto i : kAllTypes) {
            for (auto j : kAllProducers) {
                check_series(v, cost[index(i)][index(j)], horizon,
                             std::string("cost.") + name(i) + "." + name(j), 0.0, 1e9,
                             /*lo_strict=*/true);
                check_series(v, capacity[index(i)][index(j)], horizon,
                             std::string("capacity.") + name(i) + "." + name(j), 0.0, 1e15);
            }
        }
        const auto& grey_c = cost[index(HydrogenType::grey)][index(Producer::chpe)];
        const auto& blue_c = cost[index(HydrogenType::blue)][index(Producer::chpe)];
        if (static_cast<int>(grey_c.size()) == horizon &&
            static_cast<int>(blue_c.size()) == horizon) {
            for (int t = 0; t < horizon; ++t) {
                if (!(grey_c[static_cast<std::size_t>(t)] < blue_c[static_cast<std::size_t>(t)])) {
                    std::ostringstream os;
                    os << "cost ordering: cost.grey.chpe must stay below cost.blue.chpe "
                          "(violated at period "
                       << t << ")";
                    v.push_back(os.str());
                    break;
                }
            }
        }
    }
    return v;
}

void MarketCalibration::validate() const {
    auto v = violations();
    if (v.empty()) return;
    std::ostringstream os;
    os << "calibration invalid (" << v.size() << " violation" << (v.size() == 1 ? "" : "s")
       << "):";
    for (const auto& line : v) os << "\n  - " << line;
    throw ValidationError(os.str());
}

}  // namespace h2market
