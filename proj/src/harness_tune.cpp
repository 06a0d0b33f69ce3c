#include <cmath>
#include <complex>
#include <cstdio>
#include <sstream>

#include "tmdsim/errors.hpp"
#include "tmdsim/harness.hpp"
#include "tmdsim/nelder_mead.hpp"

namespace tmdsim {

double hinf_peak(const TowerAxisParams& tower, double m, double k, double c) {
  const double w_t = std::sqrt(tower.stiffness / tower.mass);
  const int points = 2000;
  const double w_lo = 0.2 * w_t, w_hi = 5.0 * w_t;
  double peak = 0.0;
  for (int i = 0; i < points; ++i) {
    const double w = w_lo * std::pow(w_hi / w_lo, static_cast<double>(i) / (points - 1));
    const std::complex<double> jwc(0.0, w * c);
    const std::complex<double> absorber = k + jwc - m * w * w;
    std::complex<double> den =
        std::complex<double>(tower.stiffness - tower.mass * w * w, w * tower.damping);
    if (std::abs(absorber) > 0.0) {
      den -= m * w * w * (k + jwc) / absorber;
    } else {
      continue;  // exact antiresonance, response -> 0
    }
    if (std::abs(den) > 0.0) {
      peak = std::max(peak, 1.0 / std::abs(den));
    }
  }
  return peak;
}

double rms_objective(const TowerAxisParams& tower, double m, double k, double c) {
  const double w_t = std::sqrt(tower.stiffness / tower.mass);
  TowerModel model{tower, tower};
  TmdConfig cfg;
  cfg.x_axis.dof_enabled = true;
  cfg.x_axis.mass = m;
  cfg.x_axis.stiffness = k;
  cfg.x_axis.damping = c;
  const MultiSine forcing = broadband_excitation(0.01 * tower.stiffness, 0.3 * w_t, 3.0 * w_t);
  const double dt = 0.02 / w_t;
  const double horizon = 150.0 / w_t;
  const CoupledResult r =
      coupled_tower_simulate(model, cfg, forcing, [](double) { return 0.0; }, dt, horizon);
  return rms_tower_x(r);
}

TuneResult tune_passive(const TowerModel& tower, double mass_ratio, const TuneBox& box,
                        TuneObjective objective, int max_evaluations) {
  if (!(mass_ratio > 0.0) || mass_ratio > 0.2) {
    throw ValidationError("mass ratio must be in (0, 0.2], got " + std::to_string(mass_ratio));
  }
  if (!(box.k_min >= 0.0) || !(box.k_max >= box.k_min) || !(box.c_min >= 0.0) ||
      !(box.c_max >= box.c_min) || !(box.k_max > 0.0) || !(box.c_max > 0.0)) {
    throw ValidationError("tuning search box must be positive with min <= max");
  }
  const double m = mass_ratio * tower.fore_aft.mass;

  TuneResult result;
  auto raw_objective = [&](double k, double c) {
    return objective == TuneObjective::hinf ? hinf_peak(tower.fore_aft, m, k, c)
                                            : rms_objective(tower.fore_aft, m, k, c);
  };
  auto boxed = [&](double k, double c) -> double {
    // Out-of-box points get a graded penalty so the simplex folds back in;
    // they are not audited as real evaluations.
    double penalty = 0.0;
    if (k < box.k_min) penalty += box.k_min - k;
    if (k > box.k_max) penalty += k - box.k_max;
    if (c < box.c_min) penalty += box.c_min - c;
    if (c > box.c_max) penalty += c - box.c_max;
    if (penalty > 0.0) return 1e30 * (1.0 + penalty);
    const double value = raw_objective(k, c);
    if (!std::isfinite(value)) {
      std::ostringstream msg;
      msg << "tuning objective is not finite at k = " << k << ", c = " << c
          << (result.audit.empty() ? " (starting point)" : "");
      throw ValidationError(msg.str());
    }
    result.audit.push_back({static_cast<int>(result.audit.size()) + 1, k, c, value});
    return value;
  };

  // Free dimensions; a zero-width box dimension stays pinned at its value.
  const double k_mid = 0.5 * (box.k_min + box.k_max);
  const double c_mid = 0.5 * (box.c_min + box.c_max);
  const double k_width = box.k_max - box.k_min;
  const double c_width = box.c_max - box.c_min;
  const bool k_free = k_width > 0.0;
  const bool c_free = c_width > 0.0;

  double best_k = k_mid, best_c = c_mid, best_value;
  int evaluations = 0;
  bool converged = true;

  if (!k_free && !c_free) {
    best_value = boxed(k_mid, c_mid);
    evaluations = 1;
  } else {
    auto unpack = [&](const std::vector<double>& v) {
      double k = k_mid, c = c_mid;
      std::size_t i = 0;
      if (k_free) k = v[i++];
      if (c_free) c = v[i];
      return std::pair{k, c};
    };
    auto fn = [&](const std::vector<double>& v) {
      const auto [k, c] = unpack(v);
      return boxed(k, c);
    };

    std::vector<std::vector<double>> simplex;
    std::vector<double> center;
    if (k_free) center.push_back(k_mid);
    if (c_free) center.push_back(c_mid);
    simplex.push_back(center);
    std::size_t dim = 0;
    if (k_free) {
      auto v = center;
      v[dim] += 0.25 * k_width;
      simplex.push_back(v);
      ++dim;
    }
    if (c_free) {
      auto v = center;
      v[dim] += 0.25 * c_width;
      simplex.push_back(v);
    }

    NelderMeadOptions opts;
    opts.max_evaluations = max_evaluations;
    const NelderMeadResult nm = nelder_mead(fn, simplex, opts);
    std::tie(best_k, best_c) = unpack(nm.best);
    best_value = nm.best_value;
    evaluations = nm.evaluations;
    converged = nm.converged;
  }

  if (!std::isfinite(best_value) || best_value >= 1e30) {
    throw ValidationError("tuning objective is not finite over the search box");
  }
  result.k = best_k;
  result.c = best_c;
  result.objective = best_value;
  result.evaluations = evaluations;
  result.converged = converged;
  return result;
}

std::string write_tune_audit_csv(const TuneResult& r) {
  std::ostringstream out;
  out << "eval,k,c,objective\n";
  char buf[128];
  for (const TuneAuditPoint& p : r.audit) {
    std::snprintf(buf, sizeof(buf), "%d,%.9g,%.9g,%.9g\n", p.eval, p.k, p.c, p.objective);
    out << buf;
  }
  return out.str();
}

}  // namespace tmdsim
