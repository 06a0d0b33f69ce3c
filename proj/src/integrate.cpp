#include "tmdsim/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tmdsim/io.hpp"

namespace tmdsim {

void MotionSeries::validate() const {
  if (samples.size() < 2) {
    throw ValidationError("motion series needs at least 2 samples, got " +
                          std::to_string(samples.size()));
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const NacelleMotionSample& s = samples[i];
    if (!std::isfinite(s.t) || !is_finite(s.accel_P_global) || !is_finite(s.omega_global) ||
        !is_finite(s.alpha_global)) {
      throw ValidationError("motion sample " + std::to_string(i) + " contains non-finite values");
    }
    if (i > 0 && !(s.t > samples[i - 1].t)) {
      std::ostringstream msg;
      msg << "motion series time must be strictly increasing: t[" << i - 1
          << "] = " << samples[i - 1].t << ", t[" << i << "] = " << s.t;
      throw ValidationError(msg.str());
    }
  }
}

namespace {

std::size_t find_interval(const MotionSeries& series, double t, std::size_t hint) {
  const auto& s = series.samples;
  std::size_t i = std::min(hint, s.size() - 2);
  if (s[i].t <= t) {
    while (i + 2 < s.size() && s[i + 1].t < t) ++i;
    return i;
  }
  // Cold or backwards query: binary search.
  auto it = std::upper_bound(s.begin(), s.end(), t,
                             [](double v, const NacelleMotionSample& m) { return v < m.t; });
  if (it == s.begin()) return 0;
  return std::min<std::size_t>(std::distance(s.begin(), it) - 1, s.size() - 2);
}

Vec3 lerp(const Vec3& a, const Vec3& b, double w) {
  return {a.x + w * (b.x - a.x), a.y + w * (b.y - a.y), a.z + w * (b.z - a.z)};
}

}  // namespace

NacelleMotionSample sample_motion(const MotionSeries& series, double t, std::size_t& hint) {
  const auto& s = series.samples;
  if (s.size() < 2 || t < series.t_first() || t > series.t_last()) {
    std::ostringstream msg;
    msg << "motion query t = " << t << " outside series span ["
        << (s.empty() ? 0.0 : series.t_first()) << ", " << (s.empty() ? 0.0 : series.t_last())
        << "]";
    throw RangeError(msg.str());
  }
  const std::size_t i = find_interval(series, t, hint);
  hint = i;
  const NacelleMotionSample& a = s[i];
  const NacelleMotionSample& b = s[i + 1];
  if (t == a.t) return a;
  if (t == b.t) return b;
  const double w = (t - a.t) / (b.t - a.t);
  NacelleMotionSample out;
  out.t = t;
  out.accel_P_global = lerp(a.accel_P_global, b.accel_P_global, w);
  out.omega_global = lerp(a.omega_global, b.omega_global, w);
  out.alpha_global = lerp(a.alpha_global, b.alpha_global, w);
  RotationMatrix blended;
  for (int k = 0; k < 9; ++k) {
    blended.m[k] = a.R_NG.m[k] + w * (b.R_NG.m[k] - a.R_NG.m[k]);
  }
  out.R_NG = gram_schmidt(blended);
  return out;
}

NacelleMotionSample sample_motion(const MotionSeries& series, double t) {
  std::size_t hint = 0;
  return sample_motion(series, t, hint);
}

ExternalForce ForceSchedule::sample(double at) const {
  if (t.empty()) return {};
  if (at <= t.front()) return f.front();
  if (at >= t.back()) return f.back();
  auto it = std::upper_bound(t.begin(), t.end(), at);
  const std::size_t i = std::distance(t.begin(), it) - 1;
  const double w = (at - t[i]) / (t[i + 1] - t[i]);
  return {f[i].f_x + w * (f[i + 1].f_x - f[i].f_x), f[i].f_y + w * (f[i + 1].f_y - f[i].f_y)};
}

SimResult simulate(const MotionSeries& series, const TmdConfig& cfg, double dt,
                   std::optional<double> horizon, const ForceSchedule* f_ext_schedule) {
  series.validate();
  validate(cfg);
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ValidationError("time step dt must be positive, got " + std::to_string(dt));
  }
  const double span = horizon.value_or(series.span());
  if (!(span >= 0.0) || span > series.span() * (1.0 + 1e-12) + 1e-12) {
    std::ostringstream msg;
    msg << "horizon " << span << " s exceeds the motion series span " << series.span() << " s";
    throw ValidationError(msg.str());
  }

  const auto steps = static_cast<std::uint64_t>(std::floor(span / dt + 1e-9));
  const double t0 = series.t_first();
  const double t_end = series.t_last();

  std::size_t hint = 0;
  // Grid times can overshoot the series end by a few ulps; clamp the queries.
  auto motion_at = [&](double t) -> NacelleMotionSample {
    return sample_motion(series, std::min(t, t_end), hint);
  };
  auto force_at = [&](double t) -> ExternalForce {
    ExternalForce cmd = f_ext_schedule ? f_ext_schedule->sample(t) : ExternalForce{};
    return active_force(cfg.control_mode, cmd);
  };
  auto deriv = [&](double t, const TmdState& s) -> TmdDerivative {
    const NacelleMotionSample raw = motion_at(t);
    return state_derivative(s, nacelle_frame_inputs(raw, cfg.gravity), cfg, force_at(t));
  };

  TmdState state{cfg.x_axis.initial_disp, 0.0, cfg.y_axis.initial_disp, 0.0};

  SimResult result;
  result.dt = dt;
  result.step_count = steps;
  result.config_digest = config_digest(cfg);
  result.mount_P = cfg.mount_P;
  result.records.reserve(steps + 1);

  for (std::uint64_t i = 0; i <= steps; ++i) {
    const double t = t0 + static_cast<double>(i) * dt;
    const NacelleMotionSample raw = motion_at(t);
    const NacelleMotionNacelleFrame u = nacelle_frame_inputs(raw, cfg.gravity);
    result.records.push_back({t, state, output_loads(state, u, raw.R_NG, cfg, force_at(t))});
    if (i < steps) {
      state = rk4_step(deriv, state, t, dt);
    }
  }
  return result;
}

}  // namespace tmdsim
