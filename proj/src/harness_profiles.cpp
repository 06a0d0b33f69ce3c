#include <cmath>

#include "tmdsim/harness.hpp"

namespace tmdsim {

// Fixed table: rotation about one global axis with a sinusoidal rate, plus
// per-component sinusoidal translational acceleration. All rates start at
// zero and all accelerations start at zero so the dampers begin load-free.
// Bounds: |omega| <= 3 rad/s, |accel| <= 5 m/s^2.
const std::vector<MotionProfile>& verification_profiles() {
  static const std::vector<MotionProfile> profiles = {
      {{0.0, 0.0, 1.0}, 3.0, 0.70, {4.0, 0.0, 0.0}, {9.5, 0.0, 0.0}},
      {{1.0, 0.0, 0.0}, 2.0, 1.30, {0.0, 2.5, 2.0}, {7.0, 3.0, 1.7}},
      {{0.0, 1.0, 0.0}, 2.5, 0.55, {2.0, 2.0, 1.0}, {2.0, 5.0, 11.0}},
      {{0.5, 0.5, 0.707}, 2.8, 1.10, {2.5, 1.5, 1.0}, {9.0, 4.0, 2.0}},
      {{1.0, 1.0, 1.0}, 1.5, 0.33, {1.0, 2.8, 2.0}, {3.3, 8.0, 0.9}},
      {{0.0, 0.6, 0.8}, 3.0, 2.10, {2.8, 0.5, 1.5}, {10.5, 1.3, 6.0}},
      {{0.8, 0.0, 0.6}, 1.0, 0.45, {0.8, 2.0, 2.6}, {1.1, 9.8, 4.2}},
      {{0.6, 0.8, 0.0}, 2.2, 1.75, {2.2, 2.2, 0.4}, {5.5, 5.0, 2.5}},
      {{0.9, 0.3, 0.3}, 2.9, 0.90, {1.6, 1.0, 2.7}, {12.0, 2.4, 3.6}},
      {{0.2, 0.9, 0.4}, 1.8, 1.50, {2.6, 1.8, 1.8}, {4.7, 6.3, 8.9}},
  };
  return profiles;
}

MotionSeries build_profile_series(const MotionProfile& p, double duration, double sample_dt) {
  const Vec3 axis = p.axis / norm(p.axis);
  const auto steps = static_cast<std::size_t>(std::llround(duration / sample_dt));

  MotionSeries series;
  series.samples.reserve(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) * sample_dt;
    // Integrated rotation angle of rate W*sin(f*t) starting from zero.
    const double angle = p.rate_amp / p.rate_freq * (1.0 - std::cos(p.rate_freq * t));
    const double rate = p.rate_amp * std::sin(p.rate_freq * t);
    const double rate_dot = p.rate_amp * p.rate_freq * std::cos(p.rate_freq * t);

    NacelleMotionSample s;
    s.t = t;
    s.R_NG = axis_angle(axis, angle).transposed();
    s.omega_global = axis * rate;
    s.alpha_global = axis * rate_dot;
    s.accel_P_global = {p.accel_amp.x * std::sin(p.accel_freq.x * t),
                        p.accel_amp.y * std::sin(p.accel_freq.y * t),
                        p.accel_amp.z * std::sin(p.accel_freq.z * t)};
    series.samples.push_back(s);
  }
  return series;
}

}  // namespace tmdsim
