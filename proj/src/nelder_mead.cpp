#include "tmdsim/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tmdsim {

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<std::vector<double>> simplex,
                             const NelderMeadOptions& opts) {
  const std::size_t n = simplex.empty() ? 0 : simplex[0].size();
  if (n == 0 || simplex.size() != n + 1) {
    throw std::invalid_argument("nelder_mead: simplex must have dim+1 vertices");
  }

  NelderMeadResult result;
  std::vector<double> values(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    values[i] = f(simplex[i]);
    ++result.evaluations;
  }

  auto order = [&]() {
    std::vector<std::size_t> idx(n + 1);
    for (std::size_t i = 0; i <= n; ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<std::vector<double>> sx(n + 1);
    std::vector<double> vx(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      sx[i] = simplex[idx[i]];
      vx[i] = values[idx[i]];
    }
    simplex.swap(sx);
    values.swap(vx);
  };

  auto simplex_size = [&]() {
    double worst = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        worst = std::max(worst, std::abs(simplex[i][j] - simplex[0][j]));
      }
    }
    return worst;
  };

  while (result.evaluations < opts.max_evaluations) {
    order();
    if (std::abs(values[n] - values[0]) <= opts.f_tolerance || simplex_size() <= opts.x_tolerance) {
      result.converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j];
    }
    for (double& c : centroid) c /= static_cast<double>(n);

    auto blend = [&](const std::vector<double>& from, double coef) {
      std::vector<double> p(n);
      for (std::size_t j = 0; j < n; ++j) p[j] = centroid[j] + coef * (from[j] - centroid[j]);
      return p;
    };

    const std::vector<double> reflected = blend(simplex[n], -opts.reflection);
    const double fr = f(reflected);
    ++result.evaluations;

    if (fr < values[0]) {
      const std::vector<double> expanded = blend(simplex[n], -opts.reflection * opts.expansion);
      const double fe = f(expanded);
      ++result.evaluations;
      if (fe < fr) {
        simplex[n] = expanded;
        values[n] = fe;
      } else {
        simplex[n] = reflected;
        values[n] = fr;
      }
    } else if (fr < values[n - 1]) {
      simplex[n] = reflected;
      values[n] = fr;
    } else {
      const bool outside = fr < values[n];
      const std::vector<double> contracted =
          outside ? blend(simplex[n], -opts.reflection * opts.contraction)
                  : blend(simplex[n], opts.contraction);
      const double fc = f(contracted);
      ++result.evaluations;
      if (fc < (outside ? fr : values[n])) {
        simplex[n] = contracted;
        values[n] = fc;
      } else {
        for (std::size_t i = 1; i <= n; ++i) {
          for (std::size_t j = 0; j < n; ++j) {
            simplex[i][j] = simplex[0][j] + opts.shrink * (simplex[i][j] - simplex[0][j]);
          }
          values[i] = f(simplex[i]);
          ++result.evaluations;
        }
      }
    }
  }

  order();
  result.best = simplex[0];
  result.best_value = values[0];
  return result;
}

}  // namespace tmdsim
