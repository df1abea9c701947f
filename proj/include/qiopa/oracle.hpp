#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "qiopa/channel.hpp"
#include "qiopa/fock.hpp"
#include "qiopa/phase_space.hpp"

namespace qiopa {

/// <m|D(alpha)|n> for m, n < cutoff.
Eigen::MatrixXcd displacement_matrix(cd alpha, int cutoff);

/// D(alpha) Pi D(alpha)^dag restricted to n < cutoff. Uses D(alpha) Pi D(alpha)^dag = D(2 alpha) Pi,
/// which makes the restriction exact.
Eigen::MatrixXcd displaced_parity(cd alpha, int cutoff);

/// (2/pi) Tr[rho D Pi D^dag]. A warning is appended when |alpha|^2 exceeds cutoff/4.
double wigner_numeric_1mode(const DensityMatrix& rho, cd alpha, std::vector<std::string>* warnings = nullptr);

/// (2/pi)^2 Tr[rho (D_alpha Pi D_alpha^dag) (x) (D_beta Pi D_beta^dag)].
double wigner_numeric_2mode(const DensityMatrix& rho, cd alpha, cd beta,
                            std::vector<std::string>* warnings = nullptr);

struct IntegrationResult {
  double value = 0.0;
  double estimated_error = 0.0;  ///< |I_h - I_2h| / 3 when the grid allows it
  std::string warning;           ///< non-empty when estimated_error > 1e-3
};

/// Trapezoid rule over the field's (possibly non-uniform) grid.
IntegrationResult integrate_wigner(const WignerField& field);

/// Squeezed |N> after loss: S(g) = exp[(g/2)(a^dag^2 - a^2)], then the Kraus channel.
DensityMatrix single_mode_reference(int N, const GainParams& gain, const LossChannel& ch, int cutoff);

/// |N+, M-> rotated to H/V, amplified by exp[g(a_H^dag a_V^dag - a_H a_V)], then equal loss on H and V.
DensityMatrix collinear_reference(int N, int M, const GainParams& gain, const LossChannel& ch, int cutoff);

/// Lossy CSS density matrix from the Kraus channel.
DensityMatrix css_reference(const CssParams& params, const LossChannel& ch, int cutoff);

/// The non-collinear output factorizes into two independently amplified pairs:
/// pair A = (1 phi, 2 phi_perp) seeded |N, 0> with gain -g, pair B = (1 phi_perp, 2 phi)
/// seeded |M, 0> with gain +g. Each pair is a two-mode matrix.
struct NoncollinearReference {
  DensityMatrix pair_a;
  DensityMatrix pair_b;
  double phi = 0.0;
};

NoncollinearReference noncollinear_reference(int N, int M, const GainParams& gain, double phi,
                                             const LossChannel& ch, int cutoff);

double wigner_numeric_noncollinear(const NoncollinearReference& ref, const PhasePoint4& pt);

}  // namespace qiopa
