#pragma once

#include <array>
#include <complex>
#include <map>
#include <string>
#include <vector>

namespace qiopa {

using cd = std::complex<double>;

/// Two-mode point: alpha for the H mode, beta for the V mode.
struct PhasePoint2 {
  cd alpha;
  cd beta;
};

/// Four-mode point of the non-collinear amplifier: alpha1 = 1H, alpha2 = 2V,
/// beta1 = 1V, beta2 = 2H.
struct PhasePoint4 {
  cd alpha1;
  cd alpha2;
  cd beta1;
  cd beta2;
};

/// Amplitudes of the two independently amplified pairs in the phi basis:
/// pair A = (1 phi, 2 phi_perp), pair B = (1 phi_perp, 2 phi).
struct NoncollinearPairs {
  cd a1;  ///< 1 phi
  cd a2;  ///< 2 phi_perp
  cd b1;  ///< 1 phi_perp
  cd b2;  ///< 2 phi
};

/// Basis change a_{1phi} = (a_1H + e^{i phi} a_1V)/sqrt2, a_{1phi_perp} = (-e^{-i phi} a_1H + a_1V)/sqrt2,
/// and likewise for beam 2.
NoncollinearPairs noncollinear_pairs(const PhasePoint4& pt, double phi);

/// Real section alpha = (X - Y)/2, beta = (X + Y)/2, i.e. X = alpha + beta^*, Y = beta - alpha^*.
PhasePoint2 collinear_projection(double X, double Y);

/// Section through the 1 phi mode with every other mode at the origin: a_{1phi} = X + iY.
PhasePoint4 noncollinear_phi_section(double X, double Y, double phi);

/// Sampled quasi-probability on a rectangular grid. values[ix * ys.size() + iy].
struct WignerField {
  std::string family;
  std::map<std::string, double> params;
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> values;

  double at(std::size_t ix, std::size_t iy) const { return values[ix * ys.size() + iy]; }
  bool consistent() const { return values.size() == xs.size() * ys.size(); }
};

/// Inclusive grid start, start+step, ... up to stop within half a step.
std::vector<double> linear_grid(double start, double stop, double step);

}  // namespace qiopa
