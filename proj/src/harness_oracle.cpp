#include <array>
#include <cmath>
#include <future>
#include <sstream>
#include <thread>
#include <vector>

#include "tmdsim/errors.hpp"
#include "tmdsim/harness.hpp"

namespace tmdsim {

namespace {

// Second derivatives of a not-a-knot cubic spline through (t_i, f_i), where
// f is strided. The penalty springs are stiff enough to feel any kink in the
// track geometry, so the orientation must be interpolated C2: a linear or
// Hermite blend rings the penalty mode at every node.
void spline_moments(const std::vector<double>& t, const double* f, std::size_t stride,
                    std::size_t n, double* m2, std::size_t m2_stride) {
  auto fv = [&](std::size_t i) { return f[i * stride]; };
  auto mv = [&](std::size_t i) -> double& { return m2[i * m2_stride]; };
  if (n == 2) {
    mv(0) = mv(1) = 0.0;
    return;
  }
  if (n == 3) {
    const double h0 = t[1] - t[0], h1 = t[2] - t[1];
    const double rhs = (fv(2) - fv(1)) / h1 - (fv(1) - fv(0)) / h0;
    mv(0) = mv(2) = 0.0;
    mv(1) = 3.0 * rhs / (h0 + h1);
    return;
  }
  // Tridiagonal solve for the interior moments M_1..M_{n-2}; the not-a-knot
  // conditions express M_0 and M_{n-1} through their neighbors.
  const std::size_t m = n - 2;
  std::vector<double> diag(m), upper(m), lower(m), rhs(m);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = t[i] - t[i - 1], h1 = t[i + 1] - t[i];
    const std::size_t r = i - 1;
    lower[r] = h0 / 6.0;
    diag[r] = (h0 + h1) / 3.0;
    upper[r] = h1 / 6.0;
    rhs[r] = (fv(i + 1) - fv(i)) / h1 - (fv(i) - fv(i - 1)) / h0;
  }
  {  // M_0 = (1 + h0/h1) M_1 - (h0/h1) M_2
    const double ratio = (t[1] - t[0]) / (t[2] - t[1]);
    diag[0] += lower[0] * (1.0 + ratio);
    upper[0] -= lower[0] * ratio;
  }
  {  // M_{n-1} = (1 + hl/hp) M_{n-2} - (hl/hp) M_{n-3}
    const double ratio = (t[n - 1] - t[n - 2]) / (t[n - 2] - t[n - 3]);
    diag[m - 1] += upper[m - 1] * (1.0 + ratio);
    lower[m - 1] -= upper[m - 1] * ratio;
  }
  for (std::size_t r = 1; r < m; ++r) {
    const double w = lower[r] / diag[r - 1];
    diag[r] -= w * upper[r - 1];
    rhs[r] -= w * rhs[r - 1];
  }
  std::vector<double> sol(m);
  sol[m - 1] = rhs[m - 1] / diag[m - 1];
  for (std::size_t r = m - 1; r-- > 0;) {
    sol[r] = (rhs[r] - upper[r] * sol[r + 1]) / diag[r];
  }
  for (std::size_t i = 0; i < m; ++i) mv(i + 1) = sol[i];
  mv(0) = (1.0 + (t[1] - t[0]) / (t[2] - t[1])) * mv(1) - (t[1] - t[0]) / (t[2] - t[1]) * mv(2);
  mv(n - 1) = (1.0 + (t[n - 1] - t[n - 2]) / (t[n - 2] - t[n - 3])) * mv(n - 2) -
              (t[n - 1] - t[n - 2]) / (t[n - 2] - t[n - 3]) * mv(n - 3);
}

// Node data flattened for the hot interpolation path, plus the nacelle
// velocity/position recovered from the prescribed accelerations (exact for
// piecewise-linear acceleration; the nacelle starts at the origin, at rest).
struct OracleGrid {
  std::vector<double> t;
  std::vector<double> accel;   // 3 per node
  std::vector<double> rot;     // 9 per node
  std::vector<double> rot_m2;  // 9 per node, spline second derivatives
  std::vector<double> omega;   // 3 per node
  std::vector<double> vel;     // 3 per node
  std::vector<double> pos;     // 3 per node

  explicit OracleGrid(const MotionSeries& series) {
    const std::size_t n = series.samples.size();
    t.resize(n);
    accel.resize(3 * n);
    rot.resize(9 * n);
    rot_m2.resize(9 * n);
    omega.resize(3 * n);
    vel.assign(3 * n, 0.0);
    pos.assign(3 * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const NacelleMotionSample& s = series.samples[i];
      t[i] = s.t;
      accel[3 * i] = s.accel_P_global.x;
      accel[3 * i + 1] = s.accel_P_global.y;
      accel[3 * i + 2] = s.accel_P_global.z;
      omega[3 * i] = s.omega_global.x;
      omega[3 * i + 1] = s.omega_global.y;
      omega[3 * i + 2] = s.omega_global.z;
      for (int k = 0; k < 9; ++k) rot[9 * i + k] = s.R_NG.m[k];
    }
    for (int k = 0; k < 9; ++k) {
      spline_moments(t, &rot[k], 9, n, &rot_m2[k], 9);
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double h = t[i + 1] - t[i];
      for (int k = 0; k < 3; ++k) {
        const double a0 = accel[3 * i + k], a1 = accel[3 * (i + 1) + k];
        vel[3 * (i + 1) + k] = vel[3 * i + k] + 0.5 * h * (a0 + a1);
        pos[3 * (i + 1) + k] =
            pos[3 * i + k] + h * vel[3 * i + k] + h * h * (a0 / 3.0 + a1 / 6.0);
      }
    }
  }
};

struct InterpolatedMotion {
  double R[9];
  double w[3];
  double p[3];
  double v[3];
};

// Interpolation within node interval `seg` at local offset tau: C2 spline for
// the rotation entries, linear for everything else.
inline void interpolate(const OracleGrid& g, std::size_t seg, double tau, InterpolatedMotion& m) {
  const double h = g.t[seg + 1] - g.t[seg];
  const double u = tau / h;
  const double* r0 = &g.rot[9 * seg];
  const double* r1 = &g.rot[9 * (seg + 1)];
  const double* m0 = &g.rot_m2[9 * seg];
  const double* m1 = &g.rot_m2[9 * (seg + 1)];
  const double a = h - tau;
  const double ca = a * (a * a - h * h) / (6.0 * h);
  const double cb = tau * (tau * tau - h * h) / (6.0 * h);
  double blended[9];
  for (int k = 0; k < 9; ++k) {
    blended[k] = r0[k] + u * (r1[k] - r0[k]) + ca * m0[k] + cb * m1[k];
  }
  // One Gram-Schmidt pass over rows, matching the series interpolation rule.
  double n0 = std::sqrt(blended[0] * blended[0] + blended[1] * blended[1] +
                        blended[2] * blended[2]);
  m.R[0] = blended[0] / n0;
  m.R[1] = blended[1] / n0;
  m.R[2] = blended[2] / n0;
  const double d01 = blended[3] * m.R[0] + blended[4] * m.R[1] + blended[5] * m.R[2];
  double row1[3] = {blended[3] - d01 * m.R[0], blended[4] - d01 * m.R[1],
                    blended[5] - d01 * m.R[2]};
  const double n1 = std::sqrt(row1[0] * row1[0] + row1[1] * row1[1] + row1[2] * row1[2]);
  m.R[3] = row1[0] / n1;
  m.R[4] = row1[1] / n1;
  m.R[5] = row1[2] / n1;
  m.R[6] = m.R[1] * m.R[5] - m.R[2] * m.R[4];
  m.R[7] = m.R[2] * m.R[3] - m.R[0] * m.R[5];
  m.R[8] = m.R[0] * m.R[4] - m.R[1] * m.R[3];

  const double* w0 = &g.omega[3 * seg];
  const double* w1 = &g.omega[3 * (seg + 1)];
  const double* a0 = &g.accel[3 * seg];
  const double* a1 = &g.accel[3 * (seg + 1)];
  for (int k = 0; k < 3; ++k) {
    m.w[k] = w0[k] + u * (w1[k] - w0[k]);
    const double da = (a1[k] - a0[k]) / h;
    m.v[k] = g.vel[3 * seg + k] + a0[k] * tau + 0.5 * da * tau * tau;
    m.p[k] = g.pos[3 * seg + k] + g.vel[3 * seg + k] * tau + 0.5 * a0[k] * tau * tau +
             da * tau * tau * tau / 6.0;
  }
}

struct TrackForces {
  double d[3];       // damper offset in the nacelle frame
  double ddot[3];    // its rate
  double force_N[3]; // force the nacelle structure applies to the mass
};

inline void track_forces(const InterpolatedMotion& m, const double* state, int track,
                         const TmdAxisParams& axis, double k_pen, double c_pen,
                         TrackForces& out) {
  const double rel[3] = {state[0] - m.p[0], state[1] - m.p[1], state[2] - m.p[2]};
  const double relv[3] = {
      state[3] - m.v[0] - (m.w[1] * rel[2] - m.w[2] * rel[1]),
      state[4] - m.v[1] - (m.w[2] * rel[0] - m.w[0] * rel[2]),
      state[5] - m.v[2] - (m.w[0] * rel[1] - m.w[1] * rel[0]),
  };
  for (int i = 0; i < 3; ++i) {
    out.d[i] = m.R[3 * i] * rel[0] + m.R[3 * i + 1] * rel[1] + m.R[3 * i + 2] * rel[2];
    out.ddot[i] = m.R[3 * i] * relv[0] + m.R[3 * i + 1] * relv[1] + m.R[3 * i + 2] * relv[2];
  }
  for (int i = 0; i < 3; ++i) {
    if (i == track) {
      out.force_N[i] = -axis.stiffness * out.d[i] - axis.damping * out.ddot[i] +
                       stop_force(out.d[i], out.ddot[i], axis);
    } else {
      out.force_N[i] = -k_pen * out.d[i] - c_pen * out.ddot[i];
    }
  }
}

}  // namespace

OracleResult inertial_oracle(const MotionSeries& series, const TmdConfig& cfg,
                             const PenaltyOracleConfig& oracle_cfg, double record_dt) {
  series.validate();
  validate(cfg);
  if (cfg.x_axis.dof_enabled == cfg.y_axis.dof_enabled) {
    throw ValidationError("inertial oracle requires exactly one enabled damper axis");
  }
  const bool on_x = cfg.x_axis.dof_enabled;
  const TmdAxisParams& axis = on_x ? cfg.x_axis : cfg.y_axis;
  const int track = on_x ? 0 : 1;
  const double mass = axis.mass;
  const double k_pen = oracle_cfg.penalty_stiffness;
  const double c_pen = oracle_cfg.penalty_damping;
  const double dt = oracle_cfg.dt;
  if (!(k_pen > 0.0) || !(c_pen > 0.0) || !(dt > 0.0)) {
    throw ValidationError("oracle penalty stiffness, damping and dt must be positive");
  }
  const double dt_bound = 0.2 / std::sqrt(k_pen / mass);
  if (dt > dt_bound) {
    std::ostringstream msg;
    msg << "oracle dt " << dt << " too large for penalty stiffness: need dt <= " << dt_bound;
    throw ValidationError(msg.str());
  }

  const OracleGrid grid(series);
  const double t0 = series.t_first();
  const double duration = series.span();
  const auto total_steps = static_cast<std::size_t>(std::llround(duration / dt));
  auto stride = static_cast<std::size_t>(std::llround(record_dt / dt));
  if (stride == 0) stride = 1;

  // Initial state: mass sits at its initial track offset and moves with the
  // nacelle (zero relative velocity). The off-track penalty springs start at
  // the deflection that holds the mass on its rigid-ride trajectory, so the
  // run does not open with an artificial settling transient. The rigid-ride
  // acceleration p" + (R^T)" d0 is pure kinematics of the given series; its
  // orientation part comes from the spline boundary moment.
  double state[6];
  {
    double d0[3] = {on_x ? axis.initial_disp : 0.0, on_x ? 0.0 : axis.initial_disp, 0.0};
    const double* R0 = &grid.rot[0];
    const double* Rpp0 = &grid.rot_m2[0];
    double hold_G[3];
    for (int i = 0; i < 3; ++i) {
      const double ride_acc =
          Rpp0[i] * d0[0] + Rpp0[3 + i] * d0[1] + Rpp0[6 + i] * d0[2];
      hold_G[i] = grid.accel[i] + ride_acc + (i == 2 ? cfg.gravity : 0.0);
    }
    for (int i = 0; i < 3; ++i) {
      if (i == track) continue;
      const double hold_N = R0[3 * i] * hold_G[0] + R0[3 * i + 1] * hold_G[1] +
                            R0[3 * i + 2] * hold_G[2];
      d0[i] = -mass * hold_N / k_pen;
    }
    double off_G[3];
    for (int i = 0; i < 3; ++i) {
      off_G[i] = R0[i] * d0[0] + R0[i + 3] * d0[1] + R0[i + 6] * d0[2];
    }
    const double w0[3] = {grid.omega[0], grid.omega[1], grid.omega[2]};
    state[0] = grid.pos[0] + off_G[0];
    state[1] = grid.pos[1] + off_G[1];
    state[2] = grid.pos[2] + off_G[2];
    state[3] = grid.vel[0] + w0[1] * off_G[2] - w0[2] * off_G[1];
    state[4] = grid.vel[1] + w0[2] * off_G[0] - w0[0] * off_G[2];
    state[5] = grid.vel[2] + w0[0] * off_G[1] - w0[1] * off_G[0];
  }

  std::size_t seg = 0;
  const std::size_t last_seg = series.samples.size() - 2;
  auto locate = [&](double t_abs) {
    while (seg < last_seg && t_abs >= grid.t[seg + 1]) ++seg;
    return std::min(t_abs - grid.t[seg], grid.t[seg + 1] - grid.t[seg]);
  };

  const double g = cfg.gravity;
  InterpolatedMotion motion;
  TrackForces forces;
  auto eval = [&](double t_abs, const double* y, double* dy) {
    const double tau = locate(t_abs);
    interpolate(grid, seg, tau, motion);
    track_forces(motion, y, track, axis, k_pen, c_pen, forces);
    double f_G[3];
    for (int i = 0; i < 3; ++i) {
      f_G[i] = motion.R[i] * forces.force_N[0] + motion.R[i + 3] * forces.force_N[1] +
               motion.R[i + 6] * forces.force_N[2];
    }
    dy[0] = y[3];
    dy[1] = y[4];
    dy[2] = y[5];
    dy[3] = f_G[0] / mass;
    dy[4] = f_G[1] / mass;
    dy[5] = f_G[2] / mass - g;
  };

  OracleResult result;
  result.records.reserve(total_steps / stride + 1);
  const int off1 = track == 0 ? 1 : 0;

  auto record = [&](std::size_t step) {
    const double t_abs = t0 + static_cast<double>(step) * dt;
    const double tau = locate(std::min(t_abs, grid.t.back()));
    interpolate(grid, seg, tau, motion);
    track_forces(motion, state, track, axis, k_pen, c_pen, forces);
    OracleRecord rec;
    rec.t = t_abs;
    rec.track_pos = forces.d[track];
    rec.track_vel = forces.ddot[track];
    rec.reaction_force_G = {
        -(motion.R[0] * forces.force_N[0] + motion.R[3] * forces.force_N[1] +
          motion.R[6] * forces.force_N[2]),
        -(motion.R[1] * forces.force_N[0] + motion.R[4] * forces.force_N[1] +
          motion.R[7] * forces.force_N[2]),
        -(motion.R[2] * forces.force_N[0] + motion.R[5] * forces.force_N[1] +
          motion.R[8] * forces.force_N[2]),
    };
    const double drift = std::max(std::abs(forces.d[off1]), std::abs(forces.d[3 - track - off1]));
    result.max_offtrack_drift = std::max(result.max_offtrack_drift, drift);
    if (result.max_offtrack_drift > 1e-4) {
      std::ostringstream msg;
      msg << "oracle invalid: off-track drift " << result.max_offtrack_drift << " m at t = "
          << t_abs;
      throw NumericsError(msg.str());
    }
    if (!std::isfinite(rec.track_pos) || !is_finite(rec.reaction_force_G)) {
      throw NumericsError("oracle invalid: non-finite state at t = " + std::to_string(t_abs));
    }
    result.records.push_back(rec);
  };

  record(0);
  double k1[6], k2[6], k3[6], k4[6], tmp[6];
  for (std::size_t step = 0; step < total_steps; ++step) {
    const double t_abs = t0 + static_cast<double>(step) * dt;
    eval(t_abs, state, k1);
    for (int i = 0; i < 6; ++i) tmp[i] = state[i] + 0.5 * dt * k1[i];
    eval(t_abs + 0.5 * dt, tmp, k2);
    for (int i = 0; i < 6; ++i) tmp[i] = state[i] + 0.5 * dt * k2[i];
    eval(t_abs + 0.5 * dt, tmp, k3);
    for (int i = 0; i < 6; ++i) tmp[i] = state[i] + dt * k3[i];
    eval(std::min(t_abs + dt, grid.t.back()), tmp, k4);
    for (int i = 0; i < 6; ++i) {
      state[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    if ((step + 1) % stride == 0) record(step + 1);
  }
  return result;
}

VerifyReport run_verification(const TmdConfig& cfg, const PenaltyOracleConfig& oracle_cfg,
                              double duration, double core_dt, bool parallel) {
  validate(cfg);
  if (!cfg.x_axis.dof_enabled && !cfg.y_axis.dof_enabled) {
    throw ValidationError("verification needs at least one enabled damper axis");
  }

  struct Task {
    int profile;
    char axis;
  };
  std::vector<Task> tasks;
  const auto& profiles = verification_profiles();
  for (int i = 0; i < static_cast<int>(profiles.size()); ++i) {
    if (cfg.x_axis.dof_enabled) tasks.push_back({i, 'x'});
    if (cfg.y_axis.dof_enabled) tasks.push_back({i, 'y'});
  }

  auto run_case = [&](const Task& task) -> VerifyCase {
    TmdConfig single = cfg;
    if (task.axis == 'x') {
      single.y_axis.dof_enabled = false;
    } else {
      single.x_axis.dof_enabled = false;
    }
    const MotionSeries series = build_profile_series(profiles[task.profile], duration, 1e-3);
    const SimResult core = simulate(series, single, core_dt);
    const OracleResult oracle = inertial_oracle(series, single, oracle_cfg, core_dt);

    VerifyCase out{task.profile, task.axis, 0.0, 0.0};
    const std::size_t n = std::min(core.records.size(), oracle.records.size());
    for (std::size_t i = 0; i < n; ++i) {
      const double core_pos =
          task.axis == 'x' ? core.records[i].state.x : core.records[i].state.y;
      out.max_pos_err = std::max(out.max_pos_err,
                                 std::abs(core_pos - oracle.records[i].track_pos));
      const Vec3 df = core.records[i].loads.force_G - oracle.records[i].reaction_force_G;
      out.max_force_err = std::max(out.max_force_err, norm_inf(df));
    }
    return out;
  };

  VerifyReport report;
  report.cases.resize(tasks.size());
  if (parallel && tasks.size() > 1) {
    const unsigned workers =
        std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                           static_cast<unsigned>(tasks.size()));
    std::vector<std::future<VerifyCase>> futures(tasks.size());
    std::size_t next = 0;
    // Simple bounded fan-out: at most `workers` live futures.
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      futures[i] =
          std::async(std::launch::async, [&run_case, &tasks, i]() { return run_case(tasks[i]); });
      if (i + 1 >= workers && next <= i + 1 - workers) {
        report.cases[next] = futures[next].get();
        ++next;
      }
    }
    for (; next < tasks.size(); ++next) report.cases[next] = futures[next].get();
  } else {
    for (std::size_t i = 0; i < tasks.size(); ++i) report.cases[i] = run_case(tasks[i]);
  }

  report.passed = true;
  for (const VerifyCase& c : report.cases) {
    if (!(c.max_pos_err < report.pos_threshold) || !(c.max_force_err < report.force_threshold)) {
      report.passed = false;
    }
  }
  return report;
}

}  // namespace tmdsim
