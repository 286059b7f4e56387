#include "heisenkit/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace heisenkit {

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> x0, const std::vector<double>& steps,
                          const SimplexOptions& opts) {
  const std::size_t d = x0.size();
  if (steps.size() != d) throw std::invalid_argument("nelder_mead: step size mismatch");
  std::vector<std::vector<double>> xs(d + 1, x0);
  for (std::size_t i = 0; i < d; ++i) xs[i + 1][i] += steps[i];
  std::vector<double> fv(d + 1);
  for (std::size_t i = 0; i <= d; ++i) fv[i] = f(xs[i]);

  std::vector<std::size_t> ord(d + 1);
  SimplexResult res;
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    std::iota(ord.begin(), ord.end(), 0);
    std::sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = ord[0], worst = ord[d], second = ord[d - 1];
    const double spread = std::abs(fv[worst] - fv[best]);
    if (spread <= opts.f_tolerance * (std::abs(fv[best]) + 1e-300)) {
      res.converged = true;
      break;
    }
    std::vector<double> centroid(d, 0.0);
    for (std::size_t i = 0; i <= d; ++i) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < d; ++k) centroid[k] += xs[i][k];
    }
    for (double& c : centroid) c /= static_cast<double>(d);

    auto blend = [&](double alpha) {
      std::vector<double> p(d);
      for (std::size_t k = 0; k < d; ++k) p[k] = centroid[k] + alpha * (xs[worst][k] - centroid[k]);
      return p;
    };
    const std::vector<double> refl = blend(-1.0);
    const double f_refl = f(refl);
    if (f_refl < fv[best]) {
      const std::vector<double> expa = blend(-2.0);
      const double f_expa = f(expa);
      if (f_expa < f_refl) {
        xs[worst] = expa;
        fv[worst] = f_expa;
      } else {
        xs[worst] = refl;
        fv[worst] = f_refl;
      }
      continue;
    }
    if (f_refl < fv[second]) {
      xs[worst] = refl;
      fv[worst] = f_refl;
      continue;
    }
    const std::vector<double> contr = blend(f_refl < fv[worst] ? -0.5 : 0.5);
    const double f_contr = f(contr);
    if (f_contr < std::min(f_refl, fv[worst])) {
      xs[worst] = contr;
      fv[worst] = f_contr;
      continue;
    }
    // shrink toward the best vertex
    for (std::size_t i = 0; i <= d; ++i) {
      if (i == best) continue;
      for (std::size_t k = 0; k < d; ++k) xs[i][k] = xs[best][k] + 0.5 * (xs[i][k] - xs[best][k]);
      fv[i] = f(xs[i]);
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i <= d; ++i)
    if (fv[i] < fv[best]) best = i;
  res.x = xs[best];
  res.value = fv[best];
  res.iterations = it;
  return res;
}

}  // namespace heisenkit
