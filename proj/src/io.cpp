#include "tmdsim/io.hpp"

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "tmdsim/errors.hpp"

namespace tmdsim {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

bool is_comment(std::string_view t) {
  return t.empty() || t.front() == '#' || t.front() == '!' || t.substr(0, 2) == "//" ||
         t.substr(0, 3) == "---";
}

bool parse_double(std::string_view tok, double& out) {
  std::string buf(tok);
  char* end = nullptr;
  out = std::strtod(buf.c_str(), &end);
  return end == buf.c_str() + buf.size() && !buf.empty();
}

bool parse_bool(std::string_view tok, bool& out) {
  if (tok == "True" || tok == "true") {
    out = true;
    return true;
  }
  if (tok == "False" || tok == "false") {
    out = false;
    return true;
  }
  return false;
}

std::string fmt(double v, const char* spec) {
  char buf[64];
  if (std::isinf(v)) return v > 0 ? "Inf" : "-Inf";
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

enum class KeyType { real, boolean, mode };

struct KeySpec {
  const char* name;
  KeyType type;
};

// All recognized input-file fields; GRAVITY is optional with default 9.81.
constexpr KeySpec kKeys[] = {
    {"TMD_CMODE", KeyType::mode},    {"TMD_X_DOF", KeyType::boolean},
    {"TMD_Y_DOF", KeyType::boolean}, {"TMD_X_DSP", KeyType::real},
    {"TMD_Y_DSP", KeyType::real},    {"TMD_X_M", KeyType::real},
    {"TMD_X_K", KeyType::real},     {"TMD_X_C", KeyType::real},
    {"TMD_Y_M", KeyType::real},     {"TMD_Y_K", KeyType::real},
    {"TMD_Y_C", KeyType::real},     {"TMD_X_DWSP", KeyType::real},
    {"TMD_X_UWSP", KeyType::real},  {"TMD_X_K_SX", KeyType::real},
    {"TMD_X_C_SX", KeyType::real},  {"TMD_Y_PLSP", KeyType::real},
    {"TMD_Y_NLSP", KeyType::real},  {"TMD_Y_K_S", KeyType::real},
    {"TMD_Y_C_S", KeyType::real},   {"TMD_P_X", KeyType::real},
    {"TMD_P_Y", KeyType::real},     {"TMD_P_Z", KeyType::real},
    {"GRAVITY", KeyType::real},
};

const KeySpec* find_key(std::string_view name) {
  for (const KeySpec& k : kKeys) {
    if (name == k.name) return &k;
  }
  return nullptr;
}

struct RawEntry {
  std::string value;
  int line = 0;
};

}  // namespace

const std::vector<std::string>& config_key_registry() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const KeySpec& k : kKeys) v.emplace_back(k.name);
    return v;
  }();
  return names;
}

TmdConfig parse_config(std::string_view text) {
  std::map<std::string, RawEntry, std::less<>> entries;
  const auto lines = split_lines(text);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const int line_no = static_cast<int>(li) + 1;
    std::string_view line = trim(lines[li]);
    if (is_comment(line)) continue;

    std::string_view key, value;
    const std::size_t eq = line.find('=');
    if (eq != std::string_view::npos) {
      key = trim(line.substr(0, eq));
      const auto rhs = split_ws(line.substr(eq + 1));
      if (key.empty() || rhs.empty()) {
        throw ValidationError("line " + std::to_string(line_no) +
                              ": expected KEY = value, got '" + std::string(line) + "'");
      }
      value = rhs[0];
    } else {
      const auto toks = split_ws(line);
      double ignored;
      bool ignored_b;
      if (toks.size() >= 2 && find_key(toks[1]) &&
          (parse_double(toks[0], ignored) || parse_bool(toks[0], ignored_b))) {
        value = toks[0];
        key = toks[1];
      } else {
        throw ValidationError("line " + std::to_string(line_no) + ": cannot parse '" +
                              std::string(line) + "'");
      }
    }

    const KeySpec* spec = find_key(key);
    if (!spec) {
      throw ValidationError("line " + std::to_string(line_no) + ": unknown key '" +
                            std::string(key) + "'");
    }
    auto [it, inserted] = entries.try_emplace(std::string(key), RawEntry{std::string(value), line_no});
    if (!inserted) {
      throw ValidationError("duplicate key " + std::string(key) + " at lines " +
                            std::to_string(it->second.line) + " and " + std::to_string(line_no));
    }
  }

  auto get_real = [&](const char* name, double def) -> double {
    auto it = entries.find(name);
    if (it == entries.end()) return def;
    double v;
    if (!parse_double(it->second.value, v)) {
      throw ValidationError("line " + std::to_string(it->second.line) + ": " + name +
                            " expects a real number, got '" + it->second.value + "'");
    }
    return v;
  };
  auto get_bool = [&](const char* name, bool def) -> bool {
    auto it = entries.find(name);
    if (it == entries.end()) return def;
    bool v;
    if (!parse_bool(it->second.value, v)) {
      throw ValidationError("line " + std::to_string(it->second.line) + ": " + name +
                            " expects True/False, got '" + it->second.value + "'");
    }
    return v;
  };

  TmdConfig cfg;
  cfg.x_axis.dof_enabled = get_bool("TMD_X_DOF", false);
  cfg.y_axis.dof_enabled = get_bool("TMD_Y_DOF", false);

  // Mass/stiffness/damping have no sensible default for an enabled axis.
  std::vector<std::string> missing;
  auto require_if = [&](bool enabled, const char* name) {
    if (enabled && entries.find(name) == entries.end()) missing.emplace_back(name);
  };
  require_if(cfg.x_axis.dof_enabled, "TMD_X_M");
  require_if(cfg.x_axis.dof_enabled, "TMD_X_K");
  require_if(cfg.x_axis.dof_enabled, "TMD_X_C");
  require_if(cfg.y_axis.dof_enabled, "TMD_Y_M");
  require_if(cfg.y_axis.dof_enabled, "TMD_Y_K");
  require_if(cfg.y_axis.dof_enabled, "TMD_Y_C");
  if (!missing.empty()) {
    std::string msg = "missing required keys:";
    for (const std::string& m : missing) msg += " " + m;
    throw ValidationError(msg);
  }

  {
    auto it = entries.find("TMD_CMODE");
    if (it != entries.end()) {
      double v;
      if (!parse_double(it->second.value, v) || (v != 1.0 && v != 2.0)) {
        throw ValidationError("line " + std::to_string(it->second.line) +
                              ": TMD_CMODE must be 1 (passive) or 2 (active), got '" +
                              it->second.value + "'");
      }
      cfg.control_mode = v == 1.0 ? ControlMode::passive : ControlMode::active;
    }
  }

  const double inf = std::numeric_limits<double>::infinity();
  cfg.x_axis.mass = get_real("TMD_X_M", 0.0);
  cfg.x_axis.stiffness = get_real("TMD_X_K", 0.0);
  cfg.x_axis.damping = get_real("TMD_X_C", 0.0);
  cfg.x_axis.initial_disp = get_real("TMD_X_DSP", 0.0);
  cfg.x_axis.stop_max = get_real("TMD_X_DWSP", inf);
  cfg.x_axis.stop_min = get_real("TMD_X_UWSP", -inf);
  cfg.x_axis.stop_stiffness = get_real("TMD_X_K_SX", 0.0);
  cfg.x_axis.stop_damping = get_real("TMD_X_C_SX", 0.0);
  cfg.y_axis.mass = get_real("TMD_Y_M", 0.0);
  cfg.y_axis.stiffness = get_real("TMD_Y_K", 0.0);
  cfg.y_axis.damping = get_real("TMD_Y_C", 0.0);
  cfg.y_axis.initial_disp = get_real("TMD_Y_DSP", 0.0);
  cfg.y_axis.stop_max = get_real("TMD_Y_PLSP", inf);
  cfg.y_axis.stop_min = get_real("TMD_Y_NLSP", -inf);
  cfg.y_axis.stop_stiffness = get_real("TMD_Y_K_S", 0.0);
  cfg.y_axis.stop_damping = get_real("TMD_Y_C_S", 0.0);
  cfg.mount_P = {get_real("TMD_P_X", 0.0), get_real("TMD_P_Y", 0.0), get_real("TMD_P_Z", 0.0)};
  cfg.gravity = get_real("GRAVITY", 9.81);

  validate(cfg);
  return cfg;
}

std::string render_config(const TmdConfig& cfg) {
  auto real = [](double v) { return fmt(v, "%.17g"); };
  std::ostringstream out;
  out << "TMD_CMODE = " << (cfg.control_mode == ControlMode::passive ? 1 : 2) << "\n";
  out << "TMD_X_DOF = " << (cfg.x_axis.dof_enabled ? "True" : "False") << "\n";
  out << "TMD_Y_DOF = " << (cfg.y_axis.dof_enabled ? "True" : "False") << "\n";
  out << "TMD_X_DSP = " << real(cfg.x_axis.initial_disp) << "\n";
  out << "TMD_Y_DSP = " << real(cfg.y_axis.initial_disp) << "\n";
  out << "TMD_X_M = " << real(cfg.x_axis.mass) << "\n";
  out << "TMD_X_K = " << real(cfg.x_axis.stiffness) << "\n";
  out << "TMD_X_C = " << real(cfg.x_axis.damping) << "\n";
  out << "TMD_Y_M = " << real(cfg.y_axis.mass) << "\n";
  out << "TMD_Y_K = " << real(cfg.y_axis.stiffness) << "\n";
  out << "TMD_Y_C = " << real(cfg.y_axis.damping) << "\n";
  out << "TMD_X_DWSP = " << real(cfg.x_axis.stop_max) << "\n";
  out << "TMD_X_UWSP = " << real(cfg.x_axis.stop_min) << "\n";
  out << "TMD_X_K_SX = " << real(cfg.x_axis.stop_stiffness) << "\n";
  out << "TMD_X_C_SX = " << real(cfg.x_axis.stop_damping) << "\n";
  out << "TMD_Y_PLSP = " << real(cfg.y_axis.stop_max) << "\n";
  out << "TMD_Y_NLSP = " << real(cfg.y_axis.stop_min) << "\n";
  out << "TMD_Y_K_S = " << real(cfg.y_axis.stop_stiffness) << "\n";
  out << "TMD_Y_C_S = " << real(cfg.y_axis.stop_damping) << "\n";
  out << "TMD_P_X = " << real(cfg.mount_P.x) << "\n";
  out << "TMD_P_Y = " << real(cfg.mount_P.y) << "\n";
  out << "TMD_P_Z = " << real(cfg.mount_P.z) << "\n";
  out << "GRAVITY = " << real(cfg.gravity) << "\n";
  return out.str();
}

namespace {

const char* const kMotionBase[] = {"time", "ax_P", "ay_P", "az_P", "wx",
                                   "wy",   "wz",   "alx",  "aly",  "alz"};
const char* const kMatrixCols[] = {"r11", "r12", "r13", "r21", "r22", "r23", "r31", "r32", "r33"};
const char* const kEulerCols[] = {"theta", "phi", "psi"};

std::vector<std::string> split_csv_row(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t end = line.find(',', start);
    if (end == std::string_view::npos) {
      out.emplace_back(trim(line.substr(start)));
      break;
    }
    out.emplace_back(trim(line.substr(start, end - start)));
    start = end + 1;
  }
  return out;
}

}  // namespace

MotionSeries read_motion_csv(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty() || trim(lines[0]).empty()) {
    throw ValidationError("motion CSV: missing header row");
  }
  const auto header = split_csv_row(lines[0]);
  std::map<std::string, int> col;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i].empty()) {
      throw ValidationError("motion CSV: empty column name in header");
    }
    if (!col.emplace(header[i], static_cast<int>(i)).second) {
      throw ValidationError("motion CSV: duplicate column '" + header[i] + "'");
    }
  }

  std::vector<std::string> missing;
  for (const char* name : kMotionBase) {
    if (!col.count(name)) missing.emplace_back(name);
  }
  int n_matrix = 0, n_euler = 0;
  for (const char* name : kMatrixCols) n_matrix += col.count(name);
  for (const char* name : kEulerCols) n_euler += col.count(name);
  const bool has_matrix = n_matrix == 9;
  const bool has_euler = n_euler == 3;
  if ((n_matrix > 0 && !has_matrix) || (n_euler > 0 && !has_euler)) {
    throw ValidationError("motion CSV: incomplete orientation columns (need all of r11..r33 or "
                          "all of theta,phi,psi)");
  }
  if (has_matrix && has_euler) {
    throw ValidationError("motion CSV: both r11..r33 and theta,phi,psi present; use exactly one");
  }
  if (!has_matrix && !has_euler) {
    missing.emplace_back("r11..r33 or theta,phi,psi");
  }
  if (!missing.empty()) {
    std::string msg = "motion CSV: missing columns:";
    for (const std::string& m : missing) msg += " " + m;
    throw ValidationError(msg);
  }
  const std::size_t expected =
      std::size(kMotionBase) + (has_matrix ? std::size(kMatrixCols) : std::size(kEulerCols));
  if (header.size() != expected) {
    for (const auto& [name, idx] : col) {
      bool known = false;
      for (const char* k : kMotionBase) known |= name == k;
      for (const char* k : kMatrixCols) known |= name == k;
      for (const char* k : kEulerCols) known |= name == k;
      if (!known) {
        throw ValidationError("motion CSV: unknown column '" + name + "'");
      }
    }
  }

  MotionSeries series;
  int data_row = 0;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (trim(lines[li]).empty()) continue;
    ++data_row;
    const auto cells = split_csv_row(lines[li]);
    if (cells.size() != header.size()) {
      throw ValidationError("motion CSV row " + std::to_string(data_row) + ": expected " +
                            std::to_string(header.size()) + " fields, got " +
                            std::to_string(cells.size()));
    }
    auto field = [&](const char* name) -> double {
      double v;
      if (!parse_double(cells[col.at(name)], v) || !std::isfinite(v)) {
        throw ValidationError("motion CSV row " + std::to_string(data_row) + ", column " + name +
                              ": bad value '" + cells[col.at(name)] + "'");
      }
      return v;
    };

    NacelleMotionSample s;
    s.t = field("time");
    s.accel_P_global = {field("ax_P"), field("ay_P"), field("az_P")};
    s.omega_global = {field("wx"), field("wy"), field("wz")};
    s.alpha_global = {field("alx"), field("aly"), field("alz")};
    if (has_matrix) {
      RotationMatrix r;
      for (int k = 0; k < 9; ++k) r.m[k] = field(kMatrixCols[k]);
      const std::string ctx = "motion CSV row " + std::to_string(data_row);
      s.R_NG = validate_rotation(r, ctx.c_str());
    } else {
      s.R_NG = euler_to_rotation(field("theta"), field("phi"), field("psi"));
    }
    if (!series.samples.empty() && !(s.t > series.samples.back().t)) {
      std::ostringstream msg;
      msg << "motion CSV row " << data_row << ": time " << s.t
          << " does not increase (previous " << series.samples.back().t << ")";
      throw ValidationError(msg.str());
    }
    series.samples.push_back(s);
  }
  series.validate();
  return series;
}

std::string write_motion_csv(const MotionSeries& series) {
  std::ostringstream out;
  out << "time,ax_P,ay_P,az_P,r11,r12,r13,r21,r22,r23,r31,r32,r33,wx,wy,wz,alx,aly,alz\n";
  for (const NacelleMotionSample& s : series.samples) {
    out << fmt(s.t, "%.17g") << ',' << fmt(s.accel_P_global.x, "%.17g") << ','
        << fmt(s.accel_P_global.y, "%.17g") << ',' << fmt(s.accel_P_global.z, "%.17g");
    for (int k = 0; k < 9; ++k) out << ',' << fmt(s.R_NG.m[k], "%.17g");
    out << ',' << fmt(s.omega_global.x, "%.17g") << ',' << fmt(s.omega_global.y, "%.17g") << ','
        << fmt(s.omega_global.z, "%.17g") << ',' << fmt(s.alpha_global.x, "%.17g") << ','
        << fmt(s.alpha_global.y, "%.17g") << ',' << fmt(s.alpha_global.z, "%.17g") << '\n';
  }
  return out.str();
}

std::string write_result_csv(const SimResult& result) {
  std::ostringstream out;
  out << "time,x,xdot,y,ydot,fx_G,fy_G,fz_G,mx_G,my_G,mz_G,fstop_x,fstop_y,"
         "fy_tmdx,fz_tmdx,fx_tmdy,fz_tmdy\n";
  for (const SimRecord& r : result.records) {
    const LoadOutput& L = r.loads;
    out << fmt(r.t, "%.9g") << ',' << fmt(r.state.x, "%.9g") << ',' << fmt(r.state.x_dot, "%.9g")
        << ',' << fmt(r.state.y, "%.9g") << ',' << fmt(r.state.y_dot, "%.9g") << ','
        << fmt(L.force_G.x, "%.9g") << ',' << fmt(L.force_G.y, "%.9g") << ','
        << fmt(L.force_G.z, "%.9g") << ',' << fmt(L.moment_G.x, "%.9g") << ','
        << fmt(L.moment_G.y, "%.9g") << ',' << fmt(L.moment_G.z, "%.9g") << ','
        << fmt(L.stop_fx, "%.9g") << ',' << fmt(L.stop_fy, "%.9g") << ','
        << fmt(L.constraints.fy_tmdx, "%.9g") << ',' << fmt(L.constraints.fz_tmdx, "%.9g") << ','
        << fmt(L.constraints.fx_tmdy, "%.9g") << ',' << fmt(L.constraints.fz_tmdy, "%.9g")
        << '\n';
  }
  return out.str();
}

ResultStates read_result_states_csv(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw ValidationError("result CSV: empty");
  const auto header = split_csv_row(lines[0]);
  std::map<std::string, int> col;
  for (std::size_t i = 0; i < header.size(); ++i) col.emplace(header[i], static_cast<int>(i));
  for (const char* need : {"time", "x", "xdot", "y", "ydot"}) {
    if (!col.count(need)) throw ValidationError(std::string("result CSV: missing column ") + need);
  }
  ResultStates out;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (trim(lines[li]).empty()) continue;
    const auto cells = split_csv_row(lines[li]);
    auto field = [&](const char* name) {
      double v;
      if (!parse_double(cells.at(col.at(name)), v)) {
        throw ValidationError("result CSV row " + std::to_string(li) + ": bad value");
      }
      return v;
    };
    out.t.push_back(field("time"));
    out.states.push_back({field("x"), field("xdot"), field("y"), field("ydot")});
  }
  return out;
}

std::string config_digest(const TmdConfig& cfg) {
  const std::string text = render_config(cfg);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open file for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw ValidationError("failed writing file: " + path);
}

}  // namespace tmdsim
