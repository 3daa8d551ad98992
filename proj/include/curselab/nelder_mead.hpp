#pragma once

#include <functional>
#include <span>
#include <vector>

namespace curselab {

struct NelderMeadOptions {
  int max_evaluations = 2000;
  double initial_step = 0.1;  // fraction of each box width
  double f_tolerance = 1e-14;
  double x_tolerance = 1e-10;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Reflects x back into [lower, upper] (mirror at the walls, periodic in 2L).
double reflect_into(double x, double lower, double upper);

/// Box-constrained Nelder-Mead with dimension-adaptive coefficients. Trial
/// points leaving the box are reflected back in, so the objective is only
/// ever evaluated inside it. Deterministic for a given start.
NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& objective,
                             std::vector<double> start, std::span<const double> lower,
                             std::span<const double> upper, const NelderMeadOptions& options = {});

}  // namespace curselab
