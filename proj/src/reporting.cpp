#include "h2market/reporting.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "h2market/numeric.hpp"

namespace fs = std::filesystem;

namespace h2market {

namespace {

std::string fmt(double v) {
    // shortest round-trip representation keeps the artifacts byte-stable
    // and losslessly re-parseable
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void row(std::vector<std::string> r) { rows.push_back(std::move(r)); }
};

void write_csv(const Table& t, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    for (std::size_t c = 0; c < t.columns.size(); ++c)
        out << (c ? "," : "") << t.columns[c];
    out << "\n";
    for (const auto& r : t.rows) {
        for (std::size_t c = 0; c < r.size(); ++c) out << (c ? "," : "") << r[c];
        out << "\n";
    }
}

void write_json(const Table& t, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    out << "{\n  \"columns\": [";
    for (std::size_t c = 0; c < t.columns.size(); ++c)
        out << (c ? ", " : "") << '"' << t.columns[c] << '"';
    out << "],\n  \"rows\": [\n";
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        out << "    [";
        for (std::size_t c = 0; c < t.rows[i].size(); ++c) {
            const std::string& v = t.rows[i][c];
            bool numeric = !v.empty() && (std::isdigit(static_cast<unsigned char>(v[0])) ||
                                          v[0] == '-' || v[0] == '+');
            out << (c ? ", " : "");
            if (numeric)
                out << v;
            else
                out << '"' << v << '"';
        }
        out << "]" << (i + 1 < t.rows.size() ? "," : "") << "\n";
    }
    out << "  ]\n}\n";
}

Table read_table(const std::string& path) {
    Table t;
    t.name = fs::path(path).stem().string();
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open artifact: " + path);
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
        nlohmann::json doc;
        in >> doc;
        for (const auto& c : doc.at("columns")) t.columns.push_back(c.get<std::string>());
        for (const auto& r : doc.at("rows")) {
            std::vector<std::string> row;
            for (const auto& v : r)
                row.push_back(v.is_string() ? v.get<std::string>() : v.dump());
            t.row(std::move(row));
        }
        return t;
    }
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (header) {
            t.columns = cells;
            header = false;
        } else if (!cells.empty()) {
            t.row(std::move(cells));
        }
    }
    return t;
}

std::string ext_of(const RunConfig& config) { return config.format == "json" ? ".json" : ".csv"; }

void write_table(const Table& t, const fs::path& dir, const RunConfig& config,
                 std::vector<std::string>& paths) {
    fs::path p = dir / (t.name + ext_of(config));
    if (config.format == "json")
        write_json(t, p.string());
    else
        write_csv(t, p.string());
    paths.push_back(p.string());
}

std::string year_of(const MarketCalibration& cal, int t) {
    return std::to_string(cal.base_year + t);
}

Table penetration_table(const ScenarioRun& run) {
    Table t;
    t.name = "penetration";
    t.columns = {"period", "year", "regime", "r", "clamped"};
    for (const auto& [regime, path] : run.paths) {
        for (std::size_t k = 0; k < path.penetration.size(); ++k) {
            bool clamped = k > 0 && path.clamped[k - 1];
            t.row({std::to_string(k), year_of(run.spec.calibration, static_cast<int>(k)),
                   name(regime), fmt(path.penetration[k]), clamped ? "1" : "0"});
        }
    }
    return t;
}

Table shares_table(const ScenarioRun& run) {
    Table t;
    t.name = "market_shares";
    t.columns = {"period", "year", "regime", "type", "share", "quantity"};
    for (const auto& [regime, path] : run.paths) {
        for (std::size_t k = 0; k < path.shares.size(); ++k) {
            for (auto i : kAllTypes) {
                t.row({std::to_string(k), year_of(run.spec.calibration, static_cast<int>(k)),
                       name(regime), name(i), fmt(path.shares[k][index(i)]),
                       fmt(path.outcomes[k].eq[index(i)].total())});
            }
        }
    }
    return t;
}

Table prices_table(const ScenarioRun& run) {
    Table t;
    t.name = "prices";
    t.columns = {"period", "year", "regime", "type", "producer", "price", "quantity"};
    for (const auto& [regime, path] : run.paths) {
        for (std::size_t k = 0; k < path.outcomes.size(); ++k) {
            const RegimeOutcome& out = path.outcomes[k];
            for (auto i : kAllTypes) {
                const TypeEquilibrium& eq = out.eq[index(i)];
                t.row({std::to_string(k), year_of(run.spec.calibration, static_cast<int>(k)),
                       name(regime), name(i), "shp", fmt(eq.shp.price), fmt(eq.shp.quantity)});
                t.row({std::to_string(k), year_of(run.spec.calibration, static_cast<int>(k)),
                       name(regime), name(i), "chpe", fmt(eq.chpe.price),
                       fmt(eq.chpe.quantity)});
                if (out.avg_price[index(i)].has_value())
                    t.row({std::to_string(k), year_of(run.spec.calibration, static_cast<int>(k)),
                           name(regime), name(i), "avg", fmt(*out.avg_price[index(i)]),
                           fmt(eq.total())});
            }
        }
    }
    return t;
}

Table profits_table(const ScenarioRun& run) {
    Table t;
    t.name = "profits";
    t.columns = {"period", "year", "regime", "type", "member", "value"};
    auto emit = [&](std::size_t k, Regime regime, const ScenarioRun& r, const char* type_name,
                    const MemberProfits& p) {
        t.row({std::to_string(k), year_of(r.spec.calibration, static_cast<int>(k)), name(regime),
               type_name, "shp", fmt(p.shp)});
        t.row({std::to_string(k), year_of(r.spec.calibration, static_cast<int>(k)), name(regime),
               type_name, "chpe", fmt(p.chpe)});
        t.row({std::to_string(k), year_of(r.spec.calibration, static_cast<int>(k)), name(regime),
               type_name, "hub", fmt(p.hub)});
    };
    for (const auto& [regime, path] : run.paths) {
        for (std::size_t k = 0; k < path.outcomes.size(); ++k) {
            for (auto i : kAllTypes) {
                const MemberProfits& p =
                    regime == Regime::co ? path.contracts[k].co_profits[index(i)]
                                         : path.outcomes[k].profits_by_type[index(i)];
                emit(k, regime, run, name(i), p);
            }
            emit(k, regime, run, "total", path.profits[k]);
        }
    }
    return t;
}

Table commission_table(const CommissionSweep& sweep) {
    Table t;
    t.name = "commission_sweep";
    t.columns = {"delta",       "hub_commission_margin",
                 "hub_profit",  "shp_profit",
                 "chpe_profit", "price_green",
                 "price_blue",  "price_grey",
                 "share_green", "share_blue",
                 "share_grey",  "penetration_final"};
    for (const auto& r : sweep.rows) {
        t.row({fmt(r.delta), fmt(r.hub_commission_margin), fmt(r.hub_profit_co),
               fmt(r.shp_profit_co), fmt(r.chpe_profit_co),
               fmt(r.avg_price[index(HydrogenType::green)]),
               fmt(r.avg_price[index(HydrogenType::blue)]),
               fmt(r.avg_price[index(HydrogenType::grey)]),
               fmt(r.share[index(HydrogenType::green)]), fmt(r.share[index(HydrogenType::blue)]),
               fmt(r.share[index(HydrogenType::grey)]), fmt(r.penetration_final)});
    }
    return t;
}

Table lumpsum_table(const ScenarioRun& run) {
    Table t;
    t.name = "lumpsum_feasibility";
    t.columns = {"period", "year",        "type",        "omega_lo",       "omega_hi",
                 "omega",  "omega_p_lo",  "omega_p_hi",  "omega_p",        "feasible"};
    auto it = run.paths.find(Regime::co);
    if (it == run.paths.end()) return t;
    const RegimePath& path = it->second;
    for (std::size_t k = 0; k < path.contracts.size(); ++k) {
        const ContractRecord& rec = path.contracts[k];
        for (auto i : kAllTypes) {
            const LumpSumBounds& b = rec.bounds[index(i)];
            const CoordinationContract& c = rec.by_type[index(i)];
            t.row({std::to_string(k), year_of(run.spec.calibration, static_cast<int>(k)), name(i),
                   fmt(b.omega_shp.lo), fmt(b.omega_shp.hi), fmt(c.omega_shp),
                   fmt(b.omega_chpe.lo), fmt(b.omega_chpe.hi), fmt(c.omega_chpe),
                   rec.feasible[index(i)] ? "1" : "0"});
        }
    }
    return t;
}

Table bargaining_table(const std::vector<BargainingRow>& rows) {
    Table t;
    t.name = "bargaining_cases";
    t.columns = {"case",       "z_shp",      "z_chpe",      "z_hub",    "omega_shp",
                 "omega_chpe", "shp_profit", "chpe_profit", "hub_profit", "feasible"};
    for (const auto& r : rows) {
        t.row({std::to_string(r.case_id), fmt(r.powers.shp), fmt(r.powers.chpe),
               fmt(r.powers.hub), fmt(r.omega_shp), fmt(r.omega_chpe), fmt(r.profits.shp),
               fmt(r.profits.chpe), fmt(r.profits.hub), r.feasible ? "1" : "0"});
    }
    return t;
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

ScenarioSpec spec_from_config(const RunConfig& config) {
    ScenarioSpec spec;
    spec.calibration = load_calibration(config.calibration_path);
    spec.powers = load_powers(config.calibration_path);
    spec.regimes = config.regimes;
    return spec;
}

std::vector<double> delta_grid(const RunConfig& config) {
    std::vector<double> grid;
    for (double d = config.delta_start; d <= config.delta_stop + 1e-12; d += config.delta_step)
        grid.push_back(std::min(d, config.delta_stop));
    return grid;
}

std::vector<std::string> run_into(const RunConfig& config, const fs::path& dir) {
    fs::create_directories(dir);
    ScenarioSpec spec = spec_from_config(config);
    ScenarioRun run_result = rollout(spec);

    std::vector<std::string> paths;
    write_table(penetration_table(run_result), dir, config, paths);
    write_table(shares_table(run_result), dir, config, paths);
    write_table(prices_table(run_result), dir, config, paths);
    write_table(profits_table(run_result), dir, config, paths);
    write_table(commission_table(commission_sweep(spec, delta_grid(config))), dir, config, paths);
    write_table(lumpsum_table(run_result), dir, config, paths);
    write_table(bargaining_table(bargaining_sweep(spec, default_bargaining_cases())), dir, config,
                paths);

    // manifest: config hash, settings and per-artifact hashes; no
    // timestamps, so identical configs reproduce identical bytes
    std::ostringstream manifest;
    manifest << "{\n";
    manifest << "  \"schema\": 1,\n";
    manifest << "  \"calibration_hash\": \"" << file_hash(config.calibration_path) << "\",\n";
    manifest << "  \"format\": \"" << config.format << "\",\n";
    manifest << "  \"regimes\": [";
    for (std::size_t k = 0; k < config.regimes.size(); ++k)
        manifest << (k ? ", " : "") << '"' << name(config.regimes[k]) << '"';
    manifest << "],\n";
    manifest << "  \"delta_grid\": [" << fmt(config.delta_start) << ", "
             << fmt(config.delta_stop) << ", " << fmt(config.delta_step) << "],\n";
    const SolverSettings settings;
    manifest << "  \"solver\": {\"tolerance\": " << fmt(settings.tolerance)
             << ", \"max_iterations\": " << settings.max_iterations
             << ", \"damping\": " << fmt(settings.damping)
             << ", \"oracle_grid\": " << settings.oracle_grid << "},\n";
    manifest << "  \"artifacts\": {\n";
    for (std::size_t k = 0; k < paths.size(); ++k) {
        manifest << "    \"" << fs::path(paths[k]).filename().string() << "\": \""
                 << file_hash(paths[k]) << '"' << (k + 1 < paths.size() ? "," : "") << "\n";
    }
    manifest << "  }\n}\n";
    fs::path mpath = dir / "manifest.json";
    std::ofstream(mpath.string(), std::ios::binary) << manifest.str();
    paths.push_back(mpath.string());

    // exit-code contract: surface infeasible coordination to the caller
    if (std::find(config.regimes.begin(), config.regimes.end(), Regime::co) !=
        config.regimes.end()) {
        const RegimePath& co = run_result.paths.at(Regime::co);
        for (const auto& rec : co.contracts)
            for (auto i : kAllTypes)
                if (!rec.feasible[index(i)])
                    throw InfeasibleCoordination(
                        "coordination infeasible for at least one period/type (see "
                        "lumpsum_feasibility artifact)");
    }
    return paths;
}

}  // namespace

std::string file_hash(const std::string& path) {
    std::ostringstream os;
    os << std::hex << fnv1a(read_bytes(path));
    return os.str();
}

std::vector<std::string> run(const RunConfig& config) {
    auto paths = run_into(config, config.out_dir);
    if (config.seedless_check) {
        RunConfig recheck = config;
        recheck.seedless_check = false;
        fs::path tmp = fs::path(config.out_dir) / ".recheck";
        auto second = run_into(recheck, tmp);
        for (std::size_t k = 0; k < paths.size(); ++k) {
            if (read_bytes(paths[k]) != read_bytes(second[k]))
                throw std::runtime_error("seedless check failed: artifacts not byte-identical");
        }
        fs::remove_all(tmp);
    }
    return paths;
}

std::vector<std::string> run_scenarios(const RunConfig& config) {
    std::vector<std::string> all;
    Table summary;
    summary.name = "scenario_summary";
    summary.columns = {"scenario",    "regime",           "final_green_share",
                       "final_blue_share", "final_grey_share", "final_penetration"};

    auto emit = [&](const std::string& label, const MarketCalibration& cal) {
        ScenarioSpec spec;
        spec.label = label;
        spec.calibration = cal;
        spec.powers = load_powers(config.calibration_path);
        spec.regimes = config.regimes;
        ScenarioRun run_result = rollout(spec);
        fs::path dir = fs::path(config.out_dir) / label;
        fs::create_directories(dir);
        std::vector<std::string> here;
        write_table(penetration_table(run_result), dir, config, here);
        write_table(shares_table(run_result), dir, config, here);
        write_table(prices_table(run_result), dir, config, here);
        write_table(profits_table(run_result), dir, config, here);
        std::ostringstream manifest;
        manifest << "{\n  \"schema\": 1,\n  \"scenario\": \"" << label << "\",\n";
        manifest << "  \"calibration_hash\": \"" << file_hash(config.calibration_path)
                 << "\",\n  \"artifacts\": {\n";
        for (std::size_t k = 0; k < here.size(); ++k)
            manifest << "    \"" << fs::path(here[k]).filename().string() << "\": \""
                     << file_hash(here[k]) << '"' << (k + 1 < here.size() ? "," : "") << "\n";
        manifest << "  }\n}\n";
        fs::path mpath = dir / "manifest.json";
        std::ofstream(mpath.string(), std::ios::binary) << manifest.str();
        here.push_back(mpath.string());
        all.insert(all.end(), here.begin(), here.end());
        for (const auto& [regime, path] : run_result.paths) {
            const auto& shares = path.shares.back();
            summary.row({label, name(regime), fmt(shares[index(HydrogenType::green)]),
                         fmt(shares[index(HydrogenType::blue)]),
                         fmt(shares[index(HydrogenType::grey)]), fmt(path.penetration.back())});
        }
    };

    MarketCalibration base = load_calibration(config.calibration_path);
    emit("baseline", base);
    for (auto kind : {ScenarioKind::tech_breakthrough, ScenarioKind::policy_change,
                      ScenarioKind::downturn})
        emit(name(kind), apply_scenario(base, kind));

    fs::create_directories(config.out_dir);
    std::vector<std::string> top;
    write_table(summary, config.out_dir, config, top);
    all.insert(all.end(), top.begin(), top.end());
    return all;
}

bool DiffReport::identical() const {
    for (const auto& d : deltas)
        if (d.max_abs != 0.0) return false;
    return true;
}

double DiffReport::max_abs() const {
    double m = 0.0;
    for (const auto& d : deltas) m = std::fmax(m, d.max_abs);
    return m;
}

DiffReport diff_runs(const std::string& dir_a, const std::string& dir_b) {
    for (const char* d : {"manifest.json"}) {
        if (!fs::exists(fs::path(dir_a) / d) || !fs::exists(fs::path(dir_b) / d))
            throw std::runtime_error("diff_runs: both directories must contain a manifest");
    }
    DiffReport report;
    for (const auto& entry : fs::directory_iterator(dir_a)) {
        if (!entry.is_regular_file()) continue;
        std::string fname = entry.path().filename().string();
        if (fname == "manifest.json") continue;
        fs::path other = fs::path(dir_b) / fname;
        if (!fs::exists(other))
            throw std::runtime_error("diff_runs: missing in second run: " + fname);
        Table a = read_table(entry.path().string());
        Table b = read_table(other.string());
        if (a.columns != b.columns || a.rows.size() != b.rows.size())
            throw std::runtime_error("diff_runs: incompatible shape for " + fname);
        for (std::size_t c = 0; c < a.columns.size(); ++c) {
            SeriesDelta delta;
            delta.file = fs::path(fname).stem().string();
            delta.column = a.columns[c];
            bool numeric = true;
            for (std::size_t r = 0; r < a.rows.size(); ++r) {
                const std::string& va = a.rows[r][c];
                const std::string& vb = b.rows[r][c];
                char* end_a = nullptr;
                char* end_b = nullptr;
                double xa = std::strtod(va.c_str(), &end_a);
                double xb = std::strtod(vb.c_str(), &end_b);
                bool num = end_a == va.c_str() + va.size() && end_b == vb.c_str() + vb.size() &&
                           !va.empty() && !vb.empty();
                if (!num) {
                    numeric = false;
                    if (va != vb)
                        throw std::runtime_error("diff_runs: label mismatch in " + fname + "/" +
                                                 a.columns[c]);
                    continue;
                }
                delta.max_abs = std::fmax(delta.max_abs, std::fabs(xa - xb));
                delta.max_rel = std::fmax(delta.max_rel, numeric::rel_diff(xa, xb));
            }
            if (numeric) report.deltas.push_back(delta);
        }
    }
    return report;
}

const SeriesDelta* find_delta(const DiffReport& report, const std::string& file,
                              const std::string& column) {
    for (const auto& d : report.deltas)
        if (d.file == file && d.column == column) return &d;
    return nullptr;
}

}  // namespace h2market
