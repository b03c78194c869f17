#include "h2market/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace h2market {

namespace {

constexpr const char* kUnitsToken = "usd-per-kg,t,kusd,days";

struct RawConfig {
    std::map<std::string, std::vector<double>> values;
    std::map<std::string, std::string> strings;
};

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    auto e = s.find_last_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

RawConfig parse_table(std::istream& in, const std::string& path) {
    RawConfig raw;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            std::ostringstream os;
            os << path << ":" << line_no << ": expected key = value";
            throw ValidationError(os.str());
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (!value.empty() && value.front() == '[') {
            if (value.back() != ']') {
                std::ostringstream os;
                os << path << ":" << line_no << ": unterminated array for " << key;
                throw ValidationError(os.str());
            }
            std::vector<double> vals;
            std::string body = value.substr(1, value.size() - 2);
            std::stringstream ss(body);
            std::string item;
            while (std::getline(ss, item, ',')) {
                item = trim(item);
                if (item.empty()) continue;
                try {
                    vals.push_back(std::stod(item));
                } catch (const std::exception&) {
                    std::ostringstream os;
                    os << path << ":" << line_no << ": bad number '" << item << "' in " << key;
                    throw ValidationError(os.str());
                }
            }
            raw.values[key] = vals;
        } else {
            try {
                std::size_t used = 0;
                double v = std::stod(value, &used);
                if (used == value.size()) {
                    raw.values[key] = {v};
                    continue;
                }
            } catch (const std::exception&) {
                // falls through to string
            }
            raw.strings[key] = value;
        }
    }
    return raw;
}

void flatten_json(const nlohmann::json& node, const std::string& prefix, RawConfig& raw,
                  const std::string& path) {
    if (node.is_object()) {
        for (auto it = node.begin(); it != node.end(); ++it)
            flatten_json(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), raw,
                         path);
    } else if (node.is_array()) {
        std::vector<double> vals;
        for (const auto& v : node) {
            if (!v.is_number())
                throw ValidationError(path + ": " + prefix + ": arrays must be numeric");
            vals.push_back(v.get<double>());
        }
        raw.values[prefix] = vals;
    } else if (node.is_number()) {
        raw.values[prefix] = {node.get<double>()};
    } else if (node.is_string()) {
        raw.strings[prefix] = node.get<std::string>();
    } else if (node.is_boolean()) {
        raw.values[prefix] = {node.get<bool>() ? 1.0 : 0.0};
    } else {
        throw ValidationError(path + ": " + prefix + ": unsupported value type");
    }
}

RawConfig read_raw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open calibration file: " + path);
    bool json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
    if (!json) return parse_table(in, path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw ValidationError(path + ": JSON parse error: " + e.what());
    }
    RawConfig raw;
    flatten_json(doc, "", raw, path);
    return raw;
}

class Builder {
  public:
    Builder(RawConfig raw, std::string path) : raw_(std::move(raw)), path_(std::move(path)) {}

    double scalar(const std::string& key, bool required = true, double fallback = 0.0) {
        auto it = raw_.values.find(key);
        if (it == raw_.values.end()) {
            if (required) missing_.push_back(key);
            return fallback;
        }
        used_.push_back(key);
        if (it->second.size() != 1) errors_.push_back(key + ": expected a single value");
        return it->second.empty() ? fallback : it->second.front();
    }

    /// scalar -> constant; [a, b] -> linear across the horizon; full array
    /// -> used as-is.
    std::vector<double> series(const std::string& key, int horizon, bool required = true,
                               double fallback = 0.0) {
        auto it = raw_.values.find(key);
        std::vector<double> out(static_cast<std::size_t>(horizon), fallback);
        if (it == raw_.values.end()) {
            if (required) missing_.push_back(key);
            return out;
        }
        used_.push_back(key);
        const auto& v = it->second;
        if (v.size() == 1) {
            std::fill(out.begin(), out.end(), v.front());
        } else if (v.size() == 2 && horizon != 2) {
            for (int t = 0; t < horizon; ++t) {
                double f = horizon > 1 ? static_cast<double>(t) / (horizon - 1) : 0.0;
                out[static_cast<std::size_t>(t)] = v[0] + (v[1] - v[0]) * f;
            }
        } else if (static_cast<int>(v.size()) == horizon) {
            out = v;
        } else {
            std::ostringstream os;
            os << key << ": expected 1, 2 or " << horizon << " values, got " << v.size();
            errors_.push_back(os.str());
        }
        return out;
    }

    bool has(const std::string& key) const { return raw_.values.count(key) > 0; }

    void check_units() {
        auto it = raw_.strings.find("units");
        if (it == raw_.strings.end())
            errors_.push_back("units: missing (expected \"" + std::string(kUnitsToken) + "\")");
        else if (it->second != kUnitsToken)
            errors_.push_back("units: got \"" + it->second + "\", expected \"" +
                              std::string(kUnitsToken) + "\"");
    }

    void finish() {
        std::vector<std::string> all;
        for (const auto& key : missing_) all.push_back(key + ": missing");
        all.insert(all.end(), errors_.begin(), errors_.end());
        if (!all.empty()) {
            std::ostringstream os;
            os << path_ << ": calibration file invalid (" << all.size() << " problem"
               << (all.size() == 1 ? "" : "s") << "):";
            for (const auto& line : all) os << "\n  - " << line;
            throw ValidationError(os.str());
        }
    }

  private:
    RawConfig raw_;
    std::string path_;
    std::vector<std::string> missing_;
    std::vector<std::string> errors_;
    std::vector<std::string> used_;
};

}  // namespace

MarketCalibration load_calibration(const std::string& path) {
    Builder b(read_raw(path), path);
    b.check_units();

    MarketCalibration cal;
    cal.horizon = static_cast<int>(b.scalar("horizon"));
    int horizon = std::max(cal.horizon, 1);
    cal.base_year = static_cast<int>(b.scalar("base_year", false, 2026));
    cal.theta = b.scalar("theta");
    cal.gamma = b.scalar("gamma");
    cal.rho = b.scalar("rho");
    cal.tau = b.scalar("tau");
    cal.beta = b.scalar("beta");
    cal.vartheta = b.scalar("vartheta");
    cal.r0 = b.scalar("r0");
    cal.q = b.series("q", horizon);
    cal.rl = b.series("rl", horizon);
    cal.alpha = b.series("alpha", horizon);
    cal.delta = b.series("delta", horizon);
    for (auto i : kAllTypes) {
        std::string ti = name(i);
        cal.d0[index(i)] = b.scalar("d0." + ti);
        cal.s1[index(i)] = b.scalar("s1." + ti);
        cal.s2[index(i)] = b.scalar("s2." + ti);
        cal.b[index(i)] = b.has("b." + ti) ? b.series("b." + ti, horizon)
                                           : b.series("b", horizon);
        for (auto j : kAllProducers) {
            std::string key = ti + "." + name(j);
            cal.cost[index(i)][index(j)] = b.series("cost." + key, horizon);
            // optional additive path on top of the stated base cost
            // (carbon charges, technology trends)
            if (b.has("cost_adjust." + key)) {
                auto adjust = b.series("cost_adjust." + key, horizon, false);
                for (int t = 0; t < horizon; ++t)
                    cal.cost[index(i)][index(j)][static_cast<std::size_t>(t)] +=
                        adjust[static_cast<std::size_t>(t)];
            }
            cal.capacity[index(i)][index(j)] = b.series("capacity." + key, horizon);
        }
    }
    cal.lead_time[index(Producer::shp)] = b.scalar("lead_time.shp");
    cal.lead_time[index(Producer::chpe)] = b.scalar("lead_time.chpe");

    b.finish();
    cal.validate();
    return cal;
}

BargainingPowers load_powers(const std::string& path) {
    Builder b(read_raw(path), path);
    BargainingPowers p;
    p.shp = b.scalar("powers.shp", false, 0.45);
    p.chpe = b.scalar("powers.chpe", false, 0.45);
    p.hub = b.scalar("powers.hub", false, 0.10);
    return p;
}

}  // namespace h2market
