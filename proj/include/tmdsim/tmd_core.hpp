#pragma once

#include <array>
#include <limits>

#include "tmdsim/frames.hpp"
#include "tmdsim/vec3.hpp"

namespace tmdsim {

/// Parameters of one damper axis. Stop positions default to +/-infinity,
/// meaning the track has no end stops.
struct TmdAxisParams {
  double mass = 0.0;            ///< kg
  double stiffness = 0.0;       ///< N/m
  double damping = 0.0;         ///< N*s/m
  bool dof_enabled = false;
  double initial_disp = 0.0;    ///< m
  double stop_max = std::numeric_limits<double>::infinity();   ///< m
  double stop_min = -std::numeric_limits<double>::infinity();  ///< m
  double stop_stiffness = 0.0;  ///< N/m
  double stop_damping = 0.0;    ///< N*s/m
};

enum class ControlMode { passive, active };

struct TmdConfig {
  TmdAxisParams x_axis{};   ///< fore-aft damper
  TmdAxisParams y_axis{};   ///< side-side damper
  double gravity = 9.81;    ///< m/s^2
  Vec3 mount_P{};           ///< damper origin P in nacelle coordinates, m
  ControlMode control_mode = ControlMode::passive;
};

/// Throws ValidationError listing every violated constraint, using the
/// input-file field names.
void validate(const TmdConfig& cfg);

/// Damper displacements/velocities along their tracks, nacelle frame.
struct TmdState {
  double x = 0.0;      ///< m
  double x_dot = 0.0;  ///< m/s
  double y = 0.0;      ///< m
  double y_dot = 0.0;  ///< m/s
};

/// Time derivative of TmdState.
struct TmdDerivative {
  double x_dot = 0.0;
  double x_acc = 0.0;
  double y_dot = 0.0;
  double y_acc = 0.0;
};

/// Commanded actuator force on each damper, N. Zero in passive mode.
struct ExternalForce {
  double f_x = 0.0;
  double f_y = 0.0;
};

/// Track reactions in the rigid directions of each damper, nacelle frame, N.
struct ConstraintForces {
  double fy_tmdx = 0.0;
  double fz_tmdx = 0.0;
  double fx_tmdy = 0.0;
  double fz_tmdy = 0.0;
};

/// Loads the dampers exert back on the nacelle, plus diagnostics.
struct LoadOutput {
  Vec3 force_G{};    ///< N, global frame
  Vec3 moment_G{};   ///< N*m, global frame, about P
  ConstraintForces constraints{};
  double stop_fx = 0.0;  ///< N
  double stop_fy = 0.0;  ///< N
};

/// End-stop penalty force. Zero inside the track. Beyond a stop the spring
/// term always pushes back; the damper term only acts while the mass is still
/// moving outward, so the stop can never pull the mass off the track.
double stop_force(double pos, double vel, const TmdAxisParams& axis);

/// Relative accelerations of both dampers in the moving nacelle frame:
/// centrifugal softening, viscous damping, base acceleration, projected
/// gravity, actuator and stop forces. A disabled axis returns zero rates.
TmdDerivative state_derivative(const TmdState& s, const NacelleMotionNacelleFrame& u,
                               const TmdConfig& cfg, const ExternalForce& f_ext);

/// Track reactions obtained from the zero-acceleration directions of each
/// damper. A disabled axis contributes nothing.
ConstraintForces constraint_forces(const TmdState& s, const NacelleMotionNacelleFrame& u,
                                   const TmdConfig& cfg);

/// Global-frame force and moment on the nacelle at P.
LoadOutput output_loads(const TmdState& s, const NacelleMotionNacelleFrame& u,
                        const RotationMatrix& R_NG, const TmdConfig& cfg,
                        const ExternalForce& f_ext);

/// Passive mode zeroes the command; active mode passes it through.
ExternalForce active_force(ControlMode mode, const ExternalForce& command);

/// First-order form d/dt s = A s + b with A, b functions of the inputs.
/// Stop forces are evaluated at `s` and folded into b.
struct StateMatrixForm {
  std::array<std::array<double, 4>, 4> A{};
  std::array<double, 4> b{};
};

StateMatrixForm state_matrix_form(const TmdState& s, const NacelleMotionNacelleFrame& u,
                                  const TmdConfig& cfg, const ExternalForce& f_ext);

}  // namespace tmdsim
