#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tmdsim/errors.hpp"
#include "tmdsim/frames.hpp"
#include "tmdsim/tmd_core.hpp"

namespace tmdsim {

/// Prescribed nacelle motion over time. Timestamps strictly increasing,
/// at least two samples.
struct MotionSeries {
  std::vector<NacelleMotionSample> samples;

  double t_first() const { return samples.front().t; }
  double t_last() const { return samples.back().t; }
  double span() const { return t_last() - t_first(); }

  /// Throws ValidationError on empty/short series, non-monotone time, or
  /// non-finite entries.
  void validate() const;
};

/// Componentwise linear interpolation; the rotation matrix is blended
/// entrywise and re-orthonormalized with one Gram-Schmidt pass. Exact at
/// sample points. Throws RangeError outside the series span.
NacelleMotionSample sample_motion(const MotionSeries& series, double t);

/// Same, with a monotone cursor for sequential access.
NacelleMotionSample sample_motion(const MotionSeries& series, double t, std::size_t& hint);

/// Actuator force commands over time, linearly interpolated and clamped to
/// the end values outside the covered span.
struct ForceSchedule {
  std::vector<double> t;
  std::vector<ExternalForce> f;

  ExternalForce sample(double at) const;
};

struct SimRecord {
  double t = 0.0;
  TmdState state{};
  LoadOutput loads{};
};

struct SimResult {
  std::vector<SimRecord> records;
  double dt = 0.0;
  std::uint64_t step_count = 0;
  std::string config_digest;  ///< hash of the originating configuration
  Vec3 mount_P{};             ///< damper origin P in nacelle coordinates; all
                              ///< loads are reported about this point
};

/// Classical fixed-step 4th-order Runge-Kutta update of the damper states.
/// `deriv` is called as deriv(t, state) -> TmdDerivative. Throws
/// NumericsError carrying t if any intermediate turns non-finite.
template <typename DerivFn>
TmdState rk4_step(DerivFn&& deriv, const TmdState& s, double t, double dt) {
  auto advance = [](const TmdState& base, const TmdDerivative& d, double h) -> TmdState {
    return {base.x + h * d.x_dot, base.x_dot + h * d.x_acc,
            base.y + h * d.y_dot, base.y_dot + h * d.y_acc};
  };
  const TmdDerivative k1 = deriv(t, s);
  const TmdDerivative k2 = deriv(t + 0.5 * dt, advance(s, k1, 0.5 * dt));
  const TmdDerivative k3 = deriv(t + 0.5 * dt, advance(s, k2, 0.5 * dt));
  const TmdDerivative k4 = deriv(t + dt, advance(s, k3, dt));
  const double sixth = dt / 6.0;
  TmdState out{s.x + sixth * (k1.x_dot + 2.0 * k2.x_dot + 2.0 * k3.x_dot + k4.x_dot),
               s.x_dot + sixth * (k1.x_acc + 2.0 * k2.x_acc + 2.0 * k3.x_acc + k4.x_acc),
               s.y + sixth * (k1.y_dot + 2.0 * k2.y_dot + 2.0 * k3.y_dot + k4.y_dot),
               s.y_dot + sixth * (k1.y_acc + 2.0 * k2.y_acc + 2.0 * k3.y_acc + k4.y_acc)};
  if (!std::isfinite(out.x) || !std::isfinite(out.x_dot) || !std::isfinite(out.y) ||
      !std::isfinite(out.y_dot)) {
    throw NumericsError("integration failure: non-finite state after step at t = " +
                        std::to_string(t));
  }
  return out;
}

/// Integrates the damper states over the motion series with fixed step dt,
/// recording state and nacelle loads at every step. States start at each
/// axis' initial displacement with zero velocity. `horizon` defaults to the
/// full series span; the result holds floor(horizon/dt) + 1 records.
SimResult simulate(const MotionSeries& series, const TmdConfig& cfg, double dt,
                   std::optional<double> horizon = std::nullopt,
                   const ForceSchedule* f_ext_schedule = nullptr);

}  // namespace tmdsim
