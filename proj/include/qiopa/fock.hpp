#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>

namespace qiopa {

using cd = std::complex<double>;

/// Amplifier gain g with its derived hyperbolic constants.
struct GainParams {
  double g = 0.0;
  double C = 1.0;      ///< cosh g
  double S = 0.0;      ///< sinh g
  double Gamma = 0.0;  ///< tanh g
  double mbar = 0.0;   ///< sinh^2 g, spontaneous photons per polarization

  static GainParams from_gain(double g);
};

enum class BasisKind { HV, PlusMinus, Equatorial };

/// Polarization basis of a two-mode state. Each basis is fixed by the creation
/// operators of its two modes written on (a_H^dag, a_V^dag):
///   HV:          a_H,  a_V
///   PlusMinus:   (a_H + a_V)/sqrt2,             (a_H - a_V)/sqrt2
///   Equatorial:  (e^{i phi} a_H + a_V)/sqrt2,  (a_H - e^{-i phi} a_V)/sqrt2
/// Equatorial(0) coincides with PlusMinus.
struct PolarizationBasis {
  BasisKind kind = BasisKind::HV;
  double phi = 0.0;

  static PolarizationBasis hv() { return {BasisKind::HV, 0.0}; }
  static PolarizationBasis plus_minus() { return {BasisKind::PlusMinus, 0.0}; }
  static PolarizationBasis equatorial(double phi) { return {BasisKind::Equatorial, phi}; }

  /// Row k holds the coefficients of mode k's creation operator on (a_H^dag, a_V^dag).
  Eigen::Matrix2cd creation_rows() const;
};

/// Single-mode truncated Fock amplitudes.
struct FockVector {
  Eigen::VectorXcd amp;
  double deficit = 0.0;  ///< 1 - sum |amp|^2 attributed to truncation

  int cutoff() const { return static_cast<int>(amp.size()); }
};

/// Two-mode truncated Fock amplitudes, amp(n_a, n_b).
struct TwoModeState {
  Eigen::MatrixXcd amp;
  PolarizationBasis basis;
  double deficit = 0.0;

  int dim_a() const { return static_cast<int>(amp.rows()); }
  int dim_b() const { return static_cast<int>(amp.cols()); }
};

/// Density matrix on a truncated (dim_a x dim_b) Fock space, flattened as
/// index = n_a * dim_b + n_b. Single-mode matrices use dim_b = 1.
struct DensityMatrix {
  Eigen::MatrixXcd m;
  int dim_a = 0;
  int dim_b = 1;
  double trace_deficit = 0.0;

  int index(int na, int nb) const { return na * dim_b + nb; }
  cd operator()(int i, int j, int k, int l) const { return m(index(i, j), index(k, l)); }
  double trace() const { return m.trace().real(); }
  bool single_mode() const { return dim_b == 1; }

  static DensityMatrix from_pure(const FockVector& v);
  static DensityMatrix from_pure(const TwoModeState& s);
};

/// Coherent-state superposition N/sqrt2 (|alpha e^{i phi}> + sign |alpha e^{-i phi}>).
struct CssParams {
  double alpha = 0.0;
  double phi = 0.0;
  int sign = +1;

  /// N_pm; throws DomainError when the superposition vanishes.
  double normalization() const;
};

struct SeedSpec {
  int N = 0;
  int M = 0;
};

struct MacroSeed {
  enum class Kind { Plus, Minus, Equatorial } kind = Kind::Plus;
  double phi = 0.0;

  static MacroSeed plus() { return {Kind::Plus, 0.0}; }
  static MacroSeed minus() { return {Kind::Minus, 0.0}; }
  static MacroSeed equatorial(double phi) { return {Kind::Equatorial, phi}; }
};

enum class HvSeed { H, V };

/// ceil(q * mbar + 25).
int default_cutoff(const GainParams& gain, double q = 12.0);

/// Output of the collinear amplifier, stored in the plus/minus basis.
/// cutoff = 0 picks default_cutoff and, if the deficit exceeds max_deficit, escalates once to the
/// larger of twice that cutoff and the geometric-tail estimate.
TwoModeState build_collinear_macrostate(const GainParams& gain, MacroSeed seed, int cutoff = 0,
                                        double max_deficit = 1e-8);

/// Two-mode squeezed single photon in the H/V basis.
TwoModeState build_hv_macrostate(const GainParams& gain, HvSeed seed, int cutoff = 0,
                                 double max_deficit = 1e-8);

FockVector build_coherent_state(cd beta, int cutoff);

/// cutoff = 0 picks ceil(alpha^2 + 10 alpha + 20).
FockVector build_css_state(const CssParams& params, int cutoff = 0);

/// Seed superposition with coefficients
/// p!(-1)^k / (2^k k! sqrt((p-2k)!)) (e^{i theta} sinh s cosh s)^k on |p-2k>.
FockVector build_photon_subtracted_seed(int p, double s, double theta, int cutoff = 0);

/// Seed |psi_p> that satisfies a^p S(xi)|0> ∝ S(xi)|psi_p> for
/// S(xi) = exp[(xi a^dag^2 - xi^* a^2)/2]; coefficients
/// p! / (2^k k! sqrt((p-2k)!)) (e^{-i theta} coth s)^k.
FockVector build_photon_subtracted_seed_exact(int p, double s, double theta, int cutoff = 0);

/// Normalized a^p S(xi)|0>, xi = s e^{i theta}, evaluated in a space of the given cutoff.
FockVector photon_subtracted_squeezed_vacuum(int p, double s, double theta, int cutoff);

FockVector fock_state(int n, int cutoff);
TwoModeState fock_state(int na, int nb, PolarizationBasis basis, int cutoff_a, int cutoff_b);

/// S(xi)|psi> with S(xi) = exp[(xi a^dag^2 - xi^* a^2)/2], xi = s e^{i theta}. Exact on the
/// output space: the disentangled form only raises photon number after the finite lowering step.
FockVector squeeze_single_mode(const FockVector& in, double s, double theta, int cutoff);

/// exp[g (a^dag b^dag - a b)] |psi>, exact on the output space.
TwoModeState squeeze_two_mode(const TwoModeState& in, double g, int cutoff_a, int cutoff_b);

/// Re-express a state in another polarization basis (passive mode unitary).
TwoModeState rotate_basis(const TwoModeState& in, PolarizationBasis target, int cutoff_a = 0,
                          int cutoff_b = 0);

/// Collinear amplifier acting on an arbitrary two-mode seed: single-mode squeezers +g on the
/// first and -g on the second mode of the plus/minus basis.
TwoModeState amplify_collinear(const TwoModeState& seed_pm, const GainParams& gain, int cutoff);

struct MeanPhotons {
  double n_plus;
  double n_minus;
  double visibility;
};

/// Closed-form mean photon numbers of the equatorial macrostate and its visibility.
MeanPhotons mean_photons_and_visibility(const GainParams& gain, double phi);

/// <n_a>, <n_b> from amplitudes.
std::pair<double, double> mean_photons(const TwoModeState& s);
std::pair<double, double> mean_photons(const DensityMatrix& rho);

enum class Mode { A, B };

DensityMatrix partial_trace(const DensityMatrix& rho, Mode keep);

}  // namespace qiopa
