#pragma once

#include <string>
#include <vector>

#include "h2market/calibration.hpp"
#include "h2market/contracts.hpp"
#include "h2market/types.hpp"

namespace h2market {

/// Loads and validates a calibration file. Two formats are accepted:
///  - structured JSON (*.json)
///  - a keyed table, one `key = value` per line, '#' comments (*.tbl)
/// Both use the same dotted keys; per-period series accept a scalar
/// (constant), a two-element array (linear interpolation across the
/// horizon) or a full array of one value per period. Units are the model
/// units documented in the README and must be declared in the file via
/// the `units` key.
MarketCalibration load_calibration(const std::string& path);

/// Bargaining powers stored alongside the calibration (optional keys
/// powers.shp / powers.chpe / powers.hub); the first documented case by
/// default.
BargainingPowers load_powers(const std::string& path);

struct RunConfig {
    std::string calibration_path;
    std::vector<Regime> regimes = {Regime::ct, Regime::cn, Regime::co};
    std::string out_dir = "out";
    std::string format = "csv";  ///< csv | json
    bool seedless_check = false; ///< run twice and require byte-identical artifacts
    double delta_start = 0.0, delta_stop = 0.5, delta_step = 0.01;
};

}  // namespace h2market
