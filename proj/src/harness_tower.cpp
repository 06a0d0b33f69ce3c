#include <cmath>
#include <numbers>
#include <sstream>

#include "tmdsim/errors.hpp"
#include "tmdsim/harness.hpp"

namespace tmdsim {

namespace {

void check_tower_axis(const TowerAxisParams& a, const char* name) {
  if (!(a.mass > 0.0) || !(a.stiffness > 0.0) || !(a.damping >= 0.0)) {
    std::ostringstream msg;
    msg << "tower " << name << " parameters must be positive (mass " << a.mass << ", stiffness "
        << a.stiffness << ", damping " << a.damping << ")";
    throw ValidationError(msg.str());
  }
}

}  // namespace

double MultiSine::operator()(double t) const {
  double f = 0.0;
  for (const Component& c : components) f += c.amp * std::sin(c.omega * t + c.phase);
  return f;
}

MultiSine broadband_excitation(double amplitude, double w_lo, double w_hi, int count) {
  MultiSine out;
  out.components.reserve(count);
  const double golden = 0.6180339887498949;
  for (int j = 0; j < count; ++j) {
    const double frac = count > 1 ? static_cast<double>(j) / (count - 1) : 0.0;
    const double omega = w_lo * std::pow(w_hi / w_lo, frac);
    const double phase = 2.0 * std::numbers::pi * std::fmod(golden * (j + 1), 1.0);
    out.components.push_back({amplitude, omega, phase});
  }
  return out;
}

CoupledResult coupled_tower_simulate(const TowerModel& tower, const TmdConfig& cfg,
                                     const ForceFn& excitation_x, const ForceFn& excitation_y,
                                     double dt, double horizon) {
  validate(cfg);
  check_tower_axis(tower.fore_aft, "fore-aft");
  check_tower_axis(tower.side_side, "side-side");
  if (!(dt > 0.0) || !(horizon > 0.0)) {
    throw ValidationError("coupled simulation needs dt > 0 and horizon > 0");
  }

  const bool x_on = cfg.x_axis.dof_enabled;
  const bool y_on = cfg.y_axis.dof_enabled;
  // A damper that acts on the other axis still rides along rigidly, so its
  // mass adds to the tower inertia in this direction.
  const double mx_eff = tower.fore_aft.mass + (y_on ? cfg.y_axis.mass : 0.0);
  const double my_eff = tower.side_side.mass + (x_on ? cfg.x_axis.mass : 0.0);

  const NacelleMotionNacelleFrame level_template{
      {}, {}, {}, {0.0, 0.0, -cfg.gravity}};

  // State: q_x, qd_x, q_y, qd_y, x, xd, y, yd.
  auto deriv = [&](double t, const std::array<double, 8>& s, std::array<double, 8>& d) {
    const TmdState tmd{s[4], s[5], s[6], s[7]};
    double reaction_x = 0.0, reaction_y = 0.0;
    if (x_on) {
      reaction_x = cfg.x_axis.stiffness * tmd.x + cfg.x_axis.damping * tmd.x_dot -
                   stop_force(tmd.x, tmd.x_dot, cfg.x_axis);
    }
    if (y_on) {
      reaction_y = cfg.y_axis.stiffness * tmd.y + cfg.y_axis.damping * tmd.y_dot -
                   stop_force(tmd.y, tmd.y_dot, cfg.y_axis);
    }
    const double qdd_x =
        (-tower.fore_aft.stiffness * s[0] - tower.fore_aft.damping * s[1] + reaction_x +
         excitation_x(t)) /
        mx_eff;
    const double qdd_y =
        (-tower.side_side.stiffness * s[2] - tower.side_side.damping * s[3] + reaction_y +
         excitation_y(t)) /
        my_eff;

    NacelleMotionNacelleFrame u = level_template;
    u.accel_P = {qdd_x, qdd_y, 0.0};
    const TmdDerivative td = state_derivative(tmd, u, cfg, {});

    d[0] = s[1];
    d[1] = qdd_x;
    d[2] = s[3];
    d[3] = qdd_y;
    d[4] = td.x_dot;
    d[5] = td.x_acc;
    d[6] = td.y_dot;
    d[7] = td.y_acc;
  };

  const auto steps = static_cast<std::size_t>(std::llround(horizon / dt));
  std::array<double, 8> state{0.0, 0.0, 0.0, 0.0, cfg.x_axis.initial_disp, 0.0,
                              cfg.y_axis.initial_disp, 0.0};

  CoupledResult result;
  result.dt = dt;
  result.records.reserve(steps + 1);
  auto record = [&](double t) {
    for (double v : state) {
      if (!std::isfinite(v)) {
        throw NumericsError("coupled simulation diverged at t = " + std::to_string(t));
      }
    }
    result.records.push_back(
        {t, state[0], state[1], state[2], state[3], {state[4], state[5], state[6], state[7]}});
  };

  std::array<double, 8> k1, k2, k3, k4, tmp;
  record(0.0);
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) * dt;
    deriv(t, state, k1);
    for (int j = 0; j < 8; ++j) tmp[j] = state[j] + 0.5 * dt * k1[j];
    deriv(t + 0.5 * dt, tmp, k2);
    for (int j = 0; j < 8; ++j) tmp[j] = state[j] + 0.5 * dt * k2[j];
    deriv(t + 0.5 * dt, tmp, k3);
    for (int j = 0; j < 8; ++j) tmp[j] = state[j] + dt * k3[j];
    deriv(t + dt, tmp, k4);
    for (int j = 0; j < 8; ++j) {
      state[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
    record(static_cast<double>(i + 1) * dt);
  }
  return result;
}

double rms_tower_x(const CoupledResult& r) {
  if (r.records.empty()) return 0.0;
  double acc = 0.0;
  for (const CoupledRecord& rec : r.records) acc += rec.q_x * rec.q_x;
  return std::sqrt(acc / static_cast<double>(r.records.size()));
}

}  // namespace tmdsim
