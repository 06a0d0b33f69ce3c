#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tmdsim/integrate.hpp"
#include "tmdsim/tmd_core.hpp"

namespace tmdsim {

/// Names of all recognized configuration keys (the damper input-file fields
/// plus GRAVITY).
const std::vector<std::string>& config_key_registry();

/// Parses a damper configuration. Two line forms are accepted:
///   1000.0   TMD_X_M   - fore-aft damper mass
///   TMD_X_M = 1000.0
/// Lines starting with '#', '!', '//' or '---' are comments. Booleans are
/// True/False. Unknown keys, duplicates, type mismatches and constraint
/// violations throw ValidationError with line numbers; mass/stiffness/damping
/// of an enabled axis must be present.
TmdConfig parse_config(std::string_view text);

/// Renders a config with every key in `KEY = value` form; parse_config of the
/// result reproduces the config exactly.
std::string render_config(const TmdConfig& cfg);

/// Reads a nacelle-motion series. Required columns:
///   time, ax_P, ay_P, az_P, wx, wy, wz, alx, aly, alz
/// plus exactly one orientation group: r11..r33 or theta, phi, psi.
/// Header order does not matter; names are case-sensitive. Angles in rad,
/// SI units throughout.
MotionSeries read_motion_csv(std::string_view text);

/// Serializes a motion series back to the same column layout (r11..r33 form).
std::string write_motion_csv(const MotionSeries& series);

/// One row per step:
///   time, x, xdot, y, ydot, fx_G, fy_G, fz_G, mx_G, my_G, mz_G,
///   fstop_x, fstop_y, fy_tmdx, fz_tmdx, fx_tmdy, fz_tmdy
/// Values carry 9 significant digits; output is byte-deterministic.
std::string write_result_csv(const SimResult& result);

/// Re-reads the time/state columns of a result CSV (round-trip checks).
struct ResultStates {
  std::vector<double> t;
  std::vector<TmdState> states;
};
ResultStates read_result_states_csv(std::string_view text);

/// 64-bit FNV-1a over the rendered config, as fixed-width hex.
std::string config_digest(const TmdConfig& cfg);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace tmdsim
