#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tmdsim/integrate.hpp"
#include "tmdsim/tmd_core.hpp"

namespace tmdsim {

// ---------------------------------------------------------------------------
// Inertial-frame oracle
// ---------------------------------------------------------------------------

/// Penalty formulation settings. The off-track directions of the damper mass
/// are restrained by stiff spring-dampers instead of rigid constraints, so
/// the whole problem integrates as a free point mass in the global frame.
struct PenaltyOracleConfig {
  double penalty_stiffness = 1e9;  ///< N/m
  double penalty_damping = 1e5;    ///< N*s/m
  double dt = 1e-6;                ///< s; keep dt <= 0.2 / sqrt(stiffness / mass)
};

struct OracleRecord {
  double t = 0.0;
  double track_pos = 0.0;      ///< on-track coordinate, nacelle frame, m
  double track_vel = 0.0;      ///< m/s
  Vec3 reaction_force_G{};     ///< force on the nacelle, global frame, N
};

struct OracleResult {
  std::vector<OracleRecord> records;
  double max_offtrack_drift = 0.0;  ///< worst constraint violation seen, m
};

/// Simulates the single enabled damper as a free point mass in the global
/// frame: the nacelle path is recovered from the prescribed accelerations
/// (starting at the origin, at rest), the mass is tied to the moving track by
/// penalty spring-dampers in the rigid directions, and spring/damper/stop/
/// gravity forces act along the track. No rotating-frame equations are used,
/// so agreement with the nacelle-frame model is an independent check.
/// Throws ValidationError unless exactly one axis is enabled, and
/// NumericsError if the off-track drift exceeds 1e-4 m.
OracleResult inertial_oracle(const MotionSeries& series, const TmdConfig& cfg,
                             const PenaltyOracleConfig& oracle_cfg, double record_dt = 1e-3);

// ---------------------------------------------------------------------------
// Deterministic verification profiles
// ---------------------------------------------------------------------------

/// One synthetic nacelle-motion profile: rotation about a fixed global axis
/// with a sinusoidal rate (closed-form orientation, so the sampled series is
/// kinematically exact) plus sinusoidal translational acceleration.
struct MotionProfile {
  Vec3 axis{0, 0, 1};    ///< rotation axis, normalized when sampled
  double rate_amp = 0;   ///< peak angular rate, rad/s
  double rate_freq = 1;  ///< rad/s
  Vec3 accel_amp{};      ///< per-component acceleration amplitude, m/s^2
  Vec3 accel_freq{};     ///< rad/s
};

/// Fixed table of 10 bounded profiles (|omega| <= 3 rad/s, |accel| <= 5 m/s^2).
const std::vector<MotionProfile>& verification_profiles();

/// Samples a profile on a uniform grid.
MotionSeries build_profile_series(const MotionProfile& p, double duration, double sample_dt);

struct VerifyCase {
  int profile = 0;
  char axis = 'x';
  double max_pos_err = 0.0;    ///< m
  double max_force_err = 0.0;  ///< N, componentwise, global frame
};

struct VerifyReport {
  std::vector<VerifyCase> cases;
  double pos_threshold = 1e-4;
  double force_threshold = 1e-3;
  bool passed = false;
};

/// Runs the nacelle-frame model against the inertial oracle on the profile
/// table, one enabled axis at a time (each axis of `cfg` that is enabled).
/// Evaluations may run concurrently; results are merged by index.
VerifyReport run_verification(const TmdConfig& cfg, const PenaltyOracleConfig& oracle_cfg,
                              double duration = 10.0, double core_dt = 1e-3,
                              bool parallel = true);

// ---------------------------------------------------------------------------
// Coupled tower demo
// ---------------------------------------------------------------------------

struct TowerAxisParams {
  double mass = 0.0;       ///< modal mass, kg
  double stiffness = 0.0;  ///< N/m
  double damping = 0.0;    ///< N*s/m
};

/// Reduced host structure: one modal mass per nacelle direction.
struct TowerModel {
  TowerAxisParams fore_aft{};
  TowerAxisParams side_side{};
};

struct CoupledRecord {
  double t = 0.0;
  double q_x = 0.0, qd_x = 0.0;  ///< tower fore-aft displacement/velocity
  double q_y = 0.0, qd_y = 0.0;  ///< tower side-side displacement/velocity
  TmdState tmd{};
};

struct CoupledResult {
  std::vector<CoupledRecord> records;
  double dt = 0.0;
};

/// External force on the tower per direction, N as a function of time.
using ForceFn = std::function<double(double)>;

/// Monolithic tower + damper integration, level orientation, no base
/// rotation. The nacelle acceleration fed to the dampers is the tower modal
/// acceleration; the damper reaction enters the tower equation. A damper
/// mounted on the cross axis rides rigidly along and augments the tower
/// inertia in that direction.
CoupledResult coupled_tower_simulate(const TowerModel& tower, const TmdConfig& cfg,
                                     const ForceFn& excitation_x, const ForceFn& excitation_y,
                                     double dt, double horizon);

/// Deterministic multi-sine forcing: `count` components log-spaced over
/// [w_lo, w_hi] with fixed phases.
struct MultiSine {
  struct Component {
    double amp, omega, phase;
  };
  std::vector<Component> components;

  double operator()(double t) const;
};

MultiSine broadband_excitation(double amplitude, double w_lo, double w_hi, int count = 24);

/// RMS of tower fore-aft displacement over the record.
double rms_tower_x(const CoupledResult& r);

// ---------------------------------------------------------------------------
// Passive tuning
// ---------------------------------------------------------------------------

enum class TuneObjective { rms, hinf };

struct TuneBox {
  double k_min = 0.0, k_max = 0.0;  ///< N/m
  double c_min = 0.0, c_max = 0.0;  ///< N*s/m
};

struct TuneAuditPoint {
  int eval = 0;
  double k = 0.0, c = 0.0, objective = 0.0;
};

struct TuneResult {
  double k = 0.0;            ///< N/m
  double c = 0.0;            ///< N*s/m
  double objective = 0.0;    ///< m (rms) or peak magnification (hinf)
  int evaluations = 0;
  bool converged = false;
  std::vector<TuneAuditPoint> audit;
};

/// Peak displacement-response magnitude of the tower fore-aft mode with an
/// attached damper (mass m, spring k, damper c), scanned on a 2000-point log
/// grid over [0.2, 5] x the tower natural frequency. Units: m/N.
double hinf_peak(const TowerAxisParams& tower, double m, double k, double c);

/// RMS tower displacement under the built-in broadband excitation.
double rms_objective(const TowerAxisParams& tower, double m, double k, double c);

/// Derivative-free search for the passive (k, c) minimizing the objective for
/// a damper of mass mass_ratio * tower modal mass. Deterministic: fixed
/// starting simplex at the box center. The best point always lies inside the
/// box. Throws ValidationError on a non-finite starting objective.
TuneResult tune_passive(const TowerModel& tower, double mass_ratio, const TuneBox& box,
                        TuneObjective objective, int max_evaluations = 400);

/// Audit trail serialized as `eval,k,c,objective` rows.
std::string write_tune_audit_csv(const TuneResult& r);

}  // namespace tmdsim
