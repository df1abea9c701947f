#pragma once

#include <Eigen/Dense>
#include <string>

#include "qiopa/channel.hpp"
#include "qiopa/fock.hpp"

namespace qiopa {

/// chi = 2 R alpha^2 sin^2 phi, psi = R alpha^2 sin 2 phi, beta = sqrt(T) alpha, gamma = sqrt(R) alpha.
struct CssQubitParams {
  double chi;
  double psi;
  double beta;
  double gamma;

  static CssQubitParams from(const CssParams& css, const LossChannel& ch);
};

struct CssLossyDensity {
  DensityMatrix fock;     ///< four-term mixture on the truncated Fock basis
  Eigen::Matrix2cd qubit; ///< [[1, s e^{-chi} e^{i psi}], [s e^{-chi} e^{-i psi}, 1]] / 2
  bool orthogonal_regime; ///< T alpha^2 sin^2 phi > 1
  std::string warning;    ///< set outside the orthogonal regime
};

/// cutoff = 0 picks ceil(alpha^2 + 10 alpha + 20).
CssLossyDensity css_lossy_density(const CssParams& params, const LossChannel& ch, int cutoff = 0);

/// <i, j| rho_T |k, q> of the lossy equatorial macrostate in PolarizationBasis::equatorial(phi),
/// with i, k counting photons in the first mode. Mixed parity gives exact zero.
cd equatorial_lossy_element(int i, int j, int k, int q, const GainParams& gain, double phi, const LossChannel& ch);

/// <i H, j V| rho_T |k H, (k + j - i) V> of the lossy H macrostate. p_max < 0 sums until the
/// geometric tail drops below 1e-17 of the partial sum; tail_bound receives the estimated remainder.
cd hv_lossy_element(int i, int j, int k, const GainParams& gain, const LossChannel& ch, int p_max = -1,
                    double* tail_bound = nullptr);

/// Assembled matrices on a cutoff x cutoff two-mode truncation.
/// Equatorial pair: both in PolarizationBasis::equatorial(phi); the perp state is the orthogonal macrostate.
DensityMatrix equatorial_lossy_density(const GainParams& gain, double phi, const LossChannel& ch, int cutoff);
DensityMatrix equatorial_perp_lossy_density(const GainParams& gain, double phi, const LossChannel& ch, int cutoff);
/// H/V pair in PolarizationBasis::hv().
DensityMatrix hv_lossy_density(const GainParams& gain, HvSeed seed, const LossChannel& ch, int cutoff);

}  // namespace qiopa
