#pragma once

#include <vector>

#include "qiopa/channel.hpp"
#include "qiopa/fock.hpp"
#include "qiopa/phase_space.hpp"

namespace qiopa {

/// Gaussian parameters of the lossy Wigner integrals.
struct LossWignerParams {
  double eps;        ///< (1 + 2 R S^2)/2
  double kappa;      ///< R C S / 2, single-mode and collinear
  double eps_prime;  ///< (1 + 2 R S^2)/2, non-collinear
  double mu;         ///< R C S, non-collinear

  static LossWignerParams from(const GainParams& gain, const LossChannel& ch);
  /// binom(N,n) (-1)^n T^n / n!
  static double c_coeff(int N, int n, double T);
  /// binom(N,n) (-T)^n / n!
  static double d_coeff(int N, int n, double T);
};

/// (-1)^n d^{2n}/dz^n dz*^n of (tau^2 - 4 mu nu)^{-1/2} exp[-(mu z^2 + nu z*^2 + tau |z|^2)/(tau^2 - 4 mu nu)].
/// n in {0, 1, 2}. Real part of the result.
double i_n_integral(int n, double mu, double nu, double tau, cd z);

/// J_{n,m}(tau, mu; z, w) for (n, m) in {(0,0), (1,0), (0,1)}.
double j_nm_integral(int n, int m, double tau, double mu, cd z, cd w);

/// Squeezing and quadrature variables of a two-mode point.
struct QuadratureDeltas {
  cd gamma_a_plus, gamma_a_minus, gamma_b_plus, gamma_b_minus;
  cd delta_a, delta_b;
  double delta2;  ///< |Delta|^2
};

QuadratureDeltas collinear_deltas(const GainParams& gain, const PhasePoint2& pt);
/// Uses alpha = (alpha1, alpha2) and beta = (beta1, beta2).
QuadratureDeltas noncollinear_deltas(const GainParams& gain, const PhasePoint4& pt);

/// Single-mode amplifier seeded with |N>. R = 0 accepts any N; R > 0 needs N <= 2.
double w_single_mode(int N, const GainParams& gain, const LossChannel& ch, double X, double Y);

/// Vacuum-seeded lossy single-mode Wigner written as one Gaussian.
double w_single_mode_vacuum_closed(const GainParams& gain, const LossChannel& ch, double X, double Y);

/// Collinear amplifier seeded with |N+, M->, evaluated at H/V amplitudes (alpha, beta).
/// R = 0 accepts any (N, M); R > 0 needs N, M <= 2.
double w_collinear(int N, int M, const GainParams& gain, const LossChannel& ch, const PhasePoint2& pt);

/// Lossless collinear form in the Delta variables.
double w_collinear_ideal_delta(int N, int M, const GainParams& gain, const PhasePoint2& pt);

/// Non-collinear amplifier seeded with |N phi, M phi_perp> on beam 1.
/// R = 0 accepts any (N, M) through the Delta form; R > 0 needs N, M <= 1.
double w_noncollinear(int N, int M, const GainParams& gain, double phi, const LossChannel& ch,
                      const PhasePoint4& pt);

/// Lossy CSS Wigner function at alpha = X + iY.
double w_css(const CssParams& params, const LossChannel& ch, double X, double Y);

/// Interference part 2 Re(c W_12) N^2/2 of w_css, with c the environment overlap.
double w_css_interference(const CssParams& params, const LossChannel& ch, double X, double Y);

/// Negativity witness point of the CSS: X0 = pi / (4 sqrt(T) alpha sin phi), Y = 0.
double css_witness_x(const CssParams& params, const LossChannel& ch);

enum class Family { Css, SingleMode, Collinear, Noncollinear };

struct WitnessParams {
  GainParams gain;
  CssParams css;
};

/// Witness value: single |1>, collinear |1+,0->, non-collinear |1 phi, 0> at the origin;
/// CSS at (css_witness_x, 0).
double negativity_at_origin(Family family, const WitnessParams& params, const LossChannel& ch);

struct Uncertainty {
  double dx;
  double dy;
  double product() const { return dx * dy; }
};

/// Closed-form quadrature spreads of the lossy single-mode state, N in {0, 1}.
Uncertainty quadrature_uncertainty(int N, const GainParams& gain, const LossChannel& ch);

/// Grid fills; values laid out as in WignerField.
WignerField single_mode_field(int N, const GainParams& gain, const LossChannel& ch,
                              const std::vector<double>& xs, const std::vector<double>& ys);
WignerField css_field(const CssParams& params, const LossChannel& ch, const std::vector<double>& xs,
                      const std::vector<double>& ys);
/// Evaluated on collinear_projection(X, Y).
WignerField collinear_field(int N, int M, const GainParams& gain, const LossChannel& ch,
                            const std::vector<double>& xs, const std::vector<double>& ys);
/// Evaluated on noncollinear_phi_section(X, Y, phi).
WignerField noncollinear_field(int N, int M, const GainParams& gain, double phi, const LossChannel& ch,
                               const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace qiopa
