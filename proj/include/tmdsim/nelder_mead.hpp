#pragma once

#include <functional>
#include <vector>

namespace tmdsim {

struct NelderMeadOptions {
  int max_evaluations = 400;
  double f_tolerance = 1e-10;   ///< stop when the simplex value spread falls below
  double x_tolerance = 1e-9;    ///< ... or the simplex collapses below this size
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
};

struct NelderMeadResult {
  std::vector<double> best;
  double best_value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Derivative-free simplex descent (reflect / expand / contract / shrink).
/// Deterministic given the starting simplex; ties broken by vertex order.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<std::vector<double>> simplex,
                             const NelderMeadOptions& opts = {});

}  // namespace tmdsim
