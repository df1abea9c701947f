#include "qiopa/phase_space.hpp"

#include <cmath>

#include "qiopa/errors.hpp"

namespace qiopa {

NoncollinearPairs noncollinear_pairs(const PhasePoint4& pt, double phi) {
  const double r = 1.0 / std::sqrt(2.0);
  const cd e = std::polar(1.0, phi);
  NoncollinearPairs p;
  p.a1 = r * (pt.alpha1 + std::conj(e) * pt.beta1);
  p.b1 = r * (-e * pt.alpha1 + pt.beta1);
  p.a2 = r * (pt.alpha2 - e * pt.beta2);
  p.b2 = r * (pt.beta2 + std::conj(e) * pt.alpha2);
  return p;
}

PhasePoint2 collinear_projection(double X, double Y) { return {cd(0.5 * (X - Y), 0.0), cd(0.5 * (X + Y), 0.0)}; }

PhasePoint4 noncollinear_phi_section(double X, double Y, double phi) {
  const cd a(X, Y);
  const double r = 1.0 / std::sqrt(2.0);
  return {r * a, cd(0.0), r * std::polar(1.0, phi) * a, cd(0.0)};
}

std::vector<double> linear_grid(double start, double stop, double step) {
  if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step))
    throw UnsupportedInput("grid: non-finite bound");
  if (step <= 0.0) throw UnsupportedInput("grid: step must be positive");
  if (stop < start) throw UnsupportedInput("grid: stop below start");
  const long n = static_cast<long>(std::floor((stop - start) / step + 0.5)) + 1;
  if (n > 10'000'000) throw UnsupportedInput("grid: too many points");
  std::vector<double> g(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = start + static_cast<double>(i) * step;
  return g;
}

}  // namespace qiopa
