#include "tmdsim/tmd_core.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "tmdsim/errors.hpp"

namespace tmdsim {

namespace {

struct AxisKeyNames {
  const char* dof;
  const char* mass;
  const char* stiffness;
  const char* damping;
  const char* disp;
  const char* stop_max;
  const char* stop_min;
  const char* stop_k;
  const char* stop_c;
};

constexpr AxisKeyNames kXNames{"TMD_X_DOF", "TMD_X_M",    "TMD_X_K",    "TMD_X_C",   "TMD_X_DSP",
                               "TMD_X_DWSP", "TMD_X_UWSP", "TMD_X_K_SX", "TMD_X_C_SX"};
constexpr AxisKeyNames kYNames{"TMD_Y_DOF", "TMD_Y_M",    "TMD_Y_K",   "TMD_Y_C",  "TMD_Y_DSP",
                               "TMD_Y_PLSP", "TMD_Y_NLSP", "TMD_Y_K_S", "TMD_Y_C_S"};

void check_axis(const TmdAxisParams& a, const AxisKeyNames& n, std::vector<std::string>& out) {
  auto bad = [&](std::ostringstream& msg) { out.push_back(msg.str()); };
  if (a.dof_enabled && !(a.mass > 0.0 && std::isfinite(a.mass))) {
    std::ostringstream msg;
    msg << n.mass << " (" << a.mass << ") must be > 0 when " << n.dof << " is True";
    bad(msg);
  }
  if (!(a.stiffness >= 0.0) || !std::isfinite(a.stiffness)) {
    std::ostringstream msg;
    msg << n.stiffness << " (" << a.stiffness << ") must be >= 0";
    bad(msg);
  }
  if (!(a.damping >= 0.0) || !std::isfinite(a.damping)) {
    std::ostringstream msg;
    msg << n.damping << " (" << a.damping << ") must be >= 0";
    bad(msg);
  }
  if (!(a.stop_stiffness >= 0.0) || !std::isfinite(a.stop_stiffness)) {
    std::ostringstream msg;
    msg << n.stop_k << " (" << a.stop_stiffness << ") must be >= 0";
    bad(msg);
  }
  if (!(a.stop_damping >= 0.0) || !std::isfinite(a.stop_damping)) {
    std::ostringstream msg;
    msg << n.stop_c << " (" << a.stop_damping << ") must be >= 0";
    bad(msg);
  }
  if (!(a.stop_min < a.stop_max)) {
    std::ostringstream msg;
    msg << n.stop_min << " (" << a.stop_min << ") must be below " << n.stop_max << " ("
        << a.stop_max << ")";
    bad(msg);
  }
  if (!std::isfinite(a.initial_disp) || a.initial_disp < a.stop_min ||
      a.initial_disp > a.stop_max) {
    std::ostringstream msg;
    msg << n.disp << " (" << a.initial_disp << ") must lie between " << n.stop_min << " and "
        << n.stop_max;
    bad(msg);
  }
}

}  // namespace

void validate(const TmdConfig& cfg) {
  std::vector<std::string> problems;
  if (!(cfg.gravity >= 0.0) || !std::isfinite(cfg.gravity)) {
    std::ostringstream msg;
    msg << "GRAVITY (" << cfg.gravity << ") must be >= 0";
    problems.push_back(msg.str());
  }
  if (!is_finite(cfg.mount_P)) {
    problems.push_back("TMD_P_X/TMD_P_Y/TMD_P_Z must be finite");
  }
  check_axis(cfg.x_axis, kXNames, problems);
  check_axis(cfg.y_axis, kYNames, problems);
  if (!problems.empty()) {
    std::string joined = "invalid configuration: ";
    for (std::size_t i = 0; i < problems.size(); ++i) {
      if (i) joined += "; ";
      joined += problems[i];
    }
    throw ValidationError(joined);
  }
}

double stop_force(double pos, double vel, const TmdAxisParams& axis) {
  double overshoot;
  bool moving_out;
  if (pos > axis.stop_max) {
    overshoot = pos - axis.stop_max;
    moving_out = vel > 0.0;
  } else if (pos < axis.stop_min) {
    overshoot = pos - axis.stop_min;
    moving_out = vel < 0.0;
  } else {
    return 0.0;
  }
  // Spring always pushes back toward the track; the damper acts only while
  // still moving outward so the stop never drags the mass further out.
  double f = -axis.stop_stiffness * overshoot;
  if (moving_out) f -= axis.stop_damping * vel;
  return f;
}

TmdDerivative state_derivative(const TmdState& s, const NacelleMotionNacelleFrame& u,
                               const TmdConfig& cfg, const ExternalForce& f_ext) {
  TmdDerivative d{};
  const double roll_rate = u.omega.x, pitch_rate = u.omega.y, yaw_rate = u.omega.z;
  if (cfg.x_axis.dof_enabled) {
    const TmdAxisParams& ax = cfg.x_axis;
    const double f_stop = stop_force(s.x, s.x_dot, ax);
    d.x_dot = s.x_dot;
    // Centrifugal softening by pitch/yaw rates, base acceleration, gravity
    // projection, actuator and stop forces.
    d.x_acc = (pitch_rate * pitch_rate + yaw_rate * yaw_rate - ax.stiffness / ax.mass) * s.x -
              (ax.damping / ax.mass) * s.x_dot - u.accel_P.x + u.gravity.x +
              (f_ext.f_x + f_stop) / ax.mass;
  }
  if (cfg.y_axis.dof_enabled) {
    const TmdAxisParams& ay = cfg.y_axis;
    const double f_stop = stop_force(s.y, s.y_dot, ay);
    d.y_dot = s.y_dot;
    d.y_acc = (roll_rate * roll_rate + yaw_rate * yaw_rate - ay.stiffness / ay.mass) * s.y -
              (ay.damping / ay.mass) * s.y_dot - u.accel_P.y + u.gravity.y +
              (f_ext.f_y + f_stop) / ay.mass;
  }
  return d;
}

ConstraintForces constraint_forces(const TmdState& s, const NacelleMotionNacelleFrame& u,
                                   const TmdConfig& cfg) {
  ConstraintForces f{};
  const double roll_rate = u.omega.x, pitch_rate = u.omega.y, yaw_rate = u.omega.z;
  const double roll_acc = u.alpha.x, pitch_acc = u.alpha.y, yaw_acc = u.alpha.z;
  if (cfg.x_axis.dof_enabled) {
    const double m = cfg.x_axis.mass;
    // Track reactions holding the fore-aft mass rigid in y and z: gravity and
    // base acceleration, plus Euler and Coriolis transport terms.
    f.fy_tmdx = m * (-u.gravity.y + u.accel_P.y + (yaw_acc + roll_rate * pitch_rate) * s.x +
                     2.0 * yaw_rate * s.x_dot);
    f.fz_tmdx = m * (-u.gravity.z + u.accel_P.z - (pitch_acc - roll_rate * yaw_rate) * s.x -
                     2.0 * pitch_rate * s.x_dot);
  }
  if (cfg.y_axis.dof_enabled) {
    const double m = cfg.y_axis.mass;
    f.fx_tmdy = m * (-u.gravity.x + u.accel_P.x - (yaw_acc - roll_rate * pitch_rate) * s.y -
                     2.0 * yaw_rate * s.y_dot);
    f.fz_tmdy = m * (-u.gravity.z + u.accel_P.z + (roll_acc + pitch_rate * yaw_rate) * s.y +
                     2.0 * roll_rate * s.y_dot);
  }
  return f;
}

LoadOutput output_loads(const TmdState& s, const NacelleMotionNacelleFrame& u,
                        const RotationMatrix& R_NG, const TmdConfig& cfg,
                        const ExternalForce& f_ext) {
  LoadOutput out{};
  out.constraints = constraint_forces(s, u, cfg);

  Vec3 force_N{};
  Vec3 moment_N{};
  if (cfg.x_axis.dof_enabled) {
    const TmdAxisParams& ax = cfg.x_axis;
    out.stop_fx = stop_force(s.x, s.x_dot, ax);
    force_N.x += ax.stiffness * s.x + ax.damping * s.x_dot - out.stop_fx - f_ext.f_x;
    force_N.y -= out.constraints.fy_tmdx;
    force_N.z -= out.constraints.fz_tmdx;
    moment_N.y += out.constraints.fz_tmdx * s.x;
    moment_N.z -= out.constraints.fy_tmdx * s.x;
  }
  if (cfg.y_axis.dof_enabled) {
    const TmdAxisParams& ay = cfg.y_axis;
    out.stop_fy = stop_force(s.y, s.y_dot, ay);
    force_N.y += ay.stiffness * s.y + ay.damping * s.y_dot - out.stop_fy - f_ext.f_y;
    force_N.x -= out.constraints.fx_tmdy;
    force_N.z -= out.constraints.fz_tmdy;
    moment_N.x -= out.constraints.fz_tmdy * s.y;
    moment_N.z += out.constraints.fx_tmdy * s.y;
  }
  out.force_G = R_NG.rotate_transpose(force_N);
  out.moment_G = R_NG.rotate_transpose(moment_N);
  return out;
}

ExternalForce active_force(ControlMode mode, const ExternalForce& command) {
  if (mode == ControlMode::passive) return {};
  return command;
}

StateMatrixForm state_matrix_form(const TmdState& s, const NacelleMotionNacelleFrame& u,
                                  const TmdConfig& cfg, const ExternalForce& f_ext) {
  StateMatrixForm form{};
  const double roll_rate = u.omega.x, pitch_rate = u.omega.y, yaw_rate = u.omega.z;
  if (cfg.x_axis.dof_enabled) {
    const TmdAxisParams& ax = cfg.x_axis;
    form.A[0][1] = 1.0;
    form.A[1][0] = pitch_rate * pitch_rate + yaw_rate * yaw_rate - ax.stiffness / ax.mass;
    form.A[1][1] = -ax.damping / ax.mass;
    form.b[1] = -u.accel_P.x + u.gravity.x +
                (f_ext.f_x + stop_force(s.x, s.x_dot, ax)) / ax.mass;
  }
  if (cfg.y_axis.dof_enabled) {
    const TmdAxisParams& ay = cfg.y_axis;
    form.A[2][3] = 1.0;
    form.A[3][2] = roll_rate * roll_rate + yaw_rate * yaw_rate - ay.stiffness / ay.mass;
    form.A[3][3] = -ay.damping / ay.mass;
    form.b[3] = -u.accel_P.y + u.gravity.y +
                (f_ext.f_y + stop_force(s.y, s.y_dot, ay)) / ay.mass;
  }
  return form;
}

}  // namespace tmdsim
