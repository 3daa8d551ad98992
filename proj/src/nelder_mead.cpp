#include "curselab/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "curselab/errors.hpp"

namespace curselab {

double reflect_into(double x, double lower, double upper) {
  const double width = upper - lower;
  if (width <= 0.0) return lower;
  double t = std::fmod(x - lower, 2.0 * width);
  if (t < 0.0) t += 2.0 * width;
  if (t > width) t = 2.0 * width - t;
  return lower + t;
}

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& objective,
                             std::vector<double> start, std::span<const double> lower,
                             std::span<const double> upper, const NelderMeadOptions& options) {
  const std::size_t dim = start.size();
  if (lower.size() != dim || upper.size() != dim) {
    throw DimensionMismatch("nelder_mead: bounds do not match the start point");
  }
  NelderMeadResult result;
  if (dim == 0) {
    result.value = objective(start);
    result.evaluations = 1;
    result.converged = true;
    return result;
  }

  const double n = static_cast<double>(dim);
  const double expand = 1.0 + 2.0 / n;
  const double contract = 0.75 - 1.0 / (2.0 * n);
  const double shrink = 1.0 - 1.0 / n;

  auto project = [&](std::vector<double>& x) {
    for (std::size_t i = 0; i < dim; ++i) x[i] = reflect_into(x[i], lower[i], upper[i]);
  };
  int evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    return objective(x);
  };

  project(start);
  std::vector<std::vector<double>> simplex(dim + 1, start);
  std::vector<double> values(dim + 1);
  for (std::size_t i = 0; i < dim; ++i) {
    const double step = options.initial_step * (upper[i] - lower[i]);
    double& c = simplex[i + 1][i];
    c = (c + step <= upper[i]) ? c + step : c - step;
  }
  for (std::size_t k = 0; k <= dim; ++k) values[k] = eval(simplex[k]);

  std::vector<std::size_t> order(dim + 1);
  std::vector<double> centroid(dim), trial(dim), trial2(dim);

  while (true) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[dim - 1];

    double diameter = 0.0;
    for (std::size_t k = 0; k <= dim; ++k)
      for (std::size_t i = 0; i < dim; ++i)
        diameter = std::max(diameter, std::abs(simplex[k][i] - simplex[best][i]));
    if (values[worst] - values[best] <= options.f_tolerance && diameter <= options.x_tolerance) {
      result.converged = true;
      break;
    }
    if (values[worst] - values[best] <= options.f_tolerance * 1e-2 && values[best] <= options.f_tolerance) {
      result.converged = true;
      break;
    }
    if (evals >= options.max_evaluations) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t k = 0; k <= dim; ++k) {
      if (k == worst) continue;
      for (std::size_t i = 0; i < dim; ++i) centroid[i] += simplex[k][i];
    }
    for (double& c : centroid) c /= n;

    auto along = [&](double coeff, std::vector<double>& out) {
      for (std::size_t i = 0; i < dim; ++i) out[i] = centroid[i] + coeff * (simplex[worst][i] - centroid[i]);
      project(out);
    };

    along(-1.0, trial);
    const double f_reflect = eval(trial);
    if (f_reflect < values[best]) {
      along(-expand, trial2);
      const double f_expand = eval(trial2);
      if (f_expand < f_reflect) {
        simplex[worst] = trial2;
        values[worst] = f_expand;
      } else {
        simplex[worst] = trial;
        values[worst] = f_reflect;
      }
      continue;
    }
    if (f_reflect < values[second]) {
      simplex[worst] = trial;
      values[worst] = f_reflect;
      continue;
    }
    if (f_reflect < values[worst]) {
      along(-contract, trial2);  // outside contraction
      const double f_c = eval(trial2);
      if (f_c <= f_reflect) {
        simplex[worst] = trial2;
        values[worst] = f_c;
        continue;
      }
    } else {
      along(contract, trial2);  // inside contraction
      const double f_c = eval(trial2);
      if (f_c < values[worst]) {
        simplex[worst] = trial2;
        values[worst] = f_c;
        continue;
      }
    }
    for (std::size_t k = 0; k <= dim; ++k) {
      if (k == best) continue;
      for (std::size_t i = 0; i < dim; ++i)
        simplex[k][i] = simplex[best][i] + shrink * (simplex[k][i] - simplex[best][i]);
      project(simplex[k]);
      values[k] = eval(simplex[k]);
    }
  }

  const auto best_it = std::min_element(values.begin(), values.end());
  const auto best_idx = static_cast<std::size_t>(best_it - values.begin());
  result.x = simplex[best_idx];
  result.value = *best_it;
  result.evaluations = evals;
  return result;
}

}  // namespace curselab
