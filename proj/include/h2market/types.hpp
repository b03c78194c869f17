#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace h2market {

/// Hydrogen product kinds traded through the hub.
enum class HydrogenType { green = 0, blue = 1, grey = 2 };
inline constexpr std::size_t kNumTypes = 3;
inline constexpr std::array<HydrogenType, kNumTypes> kAllTypes = {
    HydrogenType::green, HydrogenType::blue, HydrogenType::grey};

/// The two supply-side members. CHPE is the large-scale conventional
/// producer, SHP the small-scale renewable-leaning one.
enum class Producer { chpe = 0, shp = 1 };
inline constexpr std::size_t kNumProducers = 2;
inline constexpr std::array<Producer, kNumProducers> kAllProducers = {
    Producer::chpe, Producer::shp};

/// Collaboration regimes: market-based quantity competition (ct),
/// cooperative integration (cn), coordinated tariff contracts (co).
enum class Regime { ct = 0, cn = 1, co = 2 };
inline constexpr std::size_t kNumRegimes = 3;

inline constexpr std::size_t index(HydrogenType t) { return static_cast<std::size_t>(t); }
inline constexpr std::size_t index(Producer p) { return static_cast<std::size_t>(p); }

inline const char* name(HydrogenType t) {
    switch (t) {
        case HydrogenType::green: return "green";
        case HydrogenType::blue: return "blue";
        case HydrogenType::grey: return "grey";
    }
    return "?";
}

inline const char* name(Producer p) {
    return p == Producer::chpe ? "chpe" : "shp";
}

inline const char* name(Regime r) {
    switch (r) {
        case Regime::ct: return "ct";
        case Regime::cn: return "cn";
        case Regime::co: return "co";
    }
    return "?";
}

inline HydrogenType type_from_string(const std::string& s) {
    if (s == "green") return HydrogenType::green;
    if (s == "blue") return HydrogenType::blue;
    if (s == "grey" || s == "gray") return HydrogenType::grey;
    throw std::invalid_argument("unknown hydrogen type: " + s);
}

inline Producer producer_from_string(const std::string& s) {
    if (s == "chpe") return Producer::chpe;
    if (s == "shp") return Producer::shp;
    throw std::invalid_argument("unknown producer: " + s);
}

inline Regime regime_from_string(const std::string& s) {
    if (s == "ct") return Regime::ct;
    if (s == "cn") return Regime::cn;
    if (s == "co") return Regime::co;
    throw std::invalid_argument("unknown regime: " + s + " (expected ct, cn or co)");
}

/// Per-period profits of the three members, in thousand dollars
/// (price unit $/kg times quantity unit t).
struct MemberProfits {
    double shp = 0.0;
    double chpe = 0.0;
    double hub = 0.0;

    double total() const { return shp + chpe + hub; }

    MemberProfits& operator+=(const MemberProfits& o) {
        shp += o.shp;
        chpe += o.chpe;
        hub += o.hub;
        return *this;
    }
};

/// Thrown when a calibration violates its invariants. Carries every
/// violation found, one message per line.
class ValidationError : public std::runtime_error {
  public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when an equilibrium solve fails to converge.
class SolverError : public std::runtime_error {
  public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when the coordination scheme has no feasible lump sums.
class InfeasibleCoordination : public std::runtime_error {
  public:
    explicit InfeasibleCoordination(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace h2market
