#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "tmdsim/frames.hpp"
#include "tmdsim/integrate.hpp"

namespace tmdsim::test {

inline constexpr double kPi = std::numbers::pi;

// splitmix64; deterministic across platforms.
struct Rng {
  std::uint64_t s;
  explicit Rng(std::uint64_t seed) : s(seed) {}
  std::uint64_t next() {
    s += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(next() >> 11) * 0x1.0p-53;
  }
  Vec3 vec3(double lo, double hi) { return {uniform(lo, hi), uniform(lo, hi), uniform(lo, hi)}; }
  RotationMatrix rotation() {
    return euler_to_rotation(uniform(-kPi, kPi), uniform(-kPi, kPi), uniform(-kPi, kPi));
  }
};

// Times of upward zero crossings, linearly interpolated.
inline std::vector<double> upward_crossings(const std::vector<double>& t,
                                            const std::vector<double>& x) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    if (x[i] < 0.0 && x[i + 1] >= 0.0) {
      out.push_back(t[i] + (0.0 - x[i]) * (t[i + 1] - t[i]) / (x[i + 1] - x[i]));
    }
  }
  return out;
}

inline double measured_angular_frequency(const std::vector<double>& t,
                                         const std::vector<double>& x) {
  const auto c = upward_crossings(t, x);
  if (c.size() < 2) return 0.0;
  return 2.0 * kPi * static_cast<double>(c.size() - 1) / (c.back() - c.front());
}

// Successive positive peak values, parabolically refined.
inline std::vector<double> positive_peaks(const std::vector<double>& x) {
  std::vector<double> out;
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    if (x[i] > 0.0 && x[i] >= x[i - 1] && x[i] > x[i + 1]) {
      const double p = x[i - 1], q = x[i], r = x[i + 1];
      const double curv = p - 2.0 * q + r;
      out.push_back(curv < 0.0 ? q - (p - r) * (p - r) / (8.0 * curv) : q);
    }
  }
  return out;
}

inline double mean_log_decrement(const std::vector<double>& x, std::size_t max_pairs = 6) {
  const auto peaks = positive_peaks(x);
  if (peaks.size() < 2) return 0.0;
  double acc = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i + 1 < peaks.size() && n < max_pairs; ++i, ++n) {
    acc += std::log(peaks[i] / peaks[i + 1]);
  }
  return acc / static_cast<double>(n);
}

inline double trapezoid(const std::vector<double>& t, const std::vector<double>& f) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    acc += 0.5 * (f[i] + f[i + 1]) * (t[i + 1] - t[i]);
  }
  return acc;
}

// Stationary level nacelle sampled over [0, duration].
inline MotionSeries quiescent_series(double duration, double sample_dt = 0.5) {
  MotionSeries s;
  const auto n = static_cast<std::size_t>(std::llround(duration / sample_dt));
  for (std::size_t i = 0; i <= n; ++i) {
    NacelleMotionSample m;
    m.t = static_cast<double>(i) * sample_dt;
    s.samples.push_back(m);
  }
  return s;
}

// Constant yaw rate about global z, orientation consistent with the rate.
inline MotionSeries yaw_series(double yaw_rate, double duration, double sample_dt = 1e-2) {
  MotionSeries s;
  const auto n = static_cast<std::size_t>(std::llround(duration / sample_dt));
  for (std::size_t i = 0; i <= n; ++i) {
    NacelleMotionSample m;
    m.t = static_cast<double>(i) * sample_dt;
    m.R_NG = axis_angle({0, 0, 1}, yaw_rate * m.t).transposed();
    m.omega_global = {0, 0, yaw_rate};
    s.samples.push_back(m);
  }
  return s;
}

// Sinusoidal base acceleration along x, level orientation.
inline MotionSeries surge_series(double amp, double omega, double duration,
                                 double sample_dt = 1e-3) {
  MotionSeries s;
  const auto n = static_cast<std::size_t>(std::llround(duration / sample_dt));
  for (std::size_t i = 0; i <= n; ++i) {
    NacelleMotionSample m;
    m.t = static_cast<double>(i) * sample_dt;
    m.accel_P_global = {amp * std::sin(omega * m.t), 0.0, 0.0};
    s.samples.push_back(m);
  }
  return s;
}

inline TmdConfig oscillator_config(double m, double k, double c, double x0 = 0.0) {
  TmdConfig cfg;
  cfg.x_axis.dof_enabled = true;
  cfg.x_axis.mass = m;
  cfg.x_axis.stiffness = k;
  cfg.x_axis.damping = c;
  cfg.x_axis.initial_disp = x0;
  return cfg;
}

}  // namespace tmdsim::test
