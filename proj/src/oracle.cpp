#include "qiopa/oracle.hpp"

#include <cmath>
#include <string>

#include "qiopa/errors.hpp"
#include "qiopa/specfun.hpp"

namespace qiopa {

namespace {

constexpr double kPi = 3.14159265358979323846;

void leak_check(cd alpha, int cutoff, std::vector<std::string>* warnings) {
  if (warnings && std::norm(alpha) > cutoff / 4.0)
    warnings->push_back("oracle: displaced support may leak past cutoff " + std::to_string(cutoff));
}

double trapezoid_weight(const std::vector<double>& g, std::size_t i) {
  const std::size_t n = g.size();
  if (n < 2) return 0.0;
  double w = 0.0;
  if (i > 0) w += 0.5 * (g[i] - g[i - 1]);
  if (i + 1 < n) w += 0.5 * (g[i + 1] - g[i]);
  return w;
}

double trapezoid(const std::vector<double>& xs, const std::vector<double>& ys, const std::vector<double>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double wx = trapezoid_weight(xs, i);
    for (std::size_t j = 0; j < ys.size(); ++j) s += wx * trapezoid_weight(ys, j) * v[i * ys.size() + j];
  }
  return s;
}

DensityMatrix pair_state(int N, double g_signed, const LossChannel& ch, int cutoff) {
  const TwoModeState seed = fock_state(N, 0, PolarizationBasis::hv(), N + 1, 1);
  const TwoModeState amp = squeeze_two_mode(seed, g_signed, cutoff, cutoff);
  return apply_loss_kraus(DensityMatrix::from_pure(amp), ch);
}

}  // namespace

Eigen::MatrixXcd displacement_matrix(cd alpha, int cutoff) {
  if (cutoff < 1) throw DomainError("displacement_matrix: cutoff must be positive");
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()))
    throw DomainError("displacement_matrix: non-finite alpha");
  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(cutoff, cutoff);
  const double x = std::norm(alpha);
  if (x == 0.0) return Eigen::MatrixXcd::Identity(cutoff, cutoff);
  const double lr = std::log(std::abs(alpha));
  const double th = std::arg(alpha);
  for (int m = 0; m < cutoff; ++m)
    for (int n = 0; n < cutoff; ++n) {
      const int lo = std::min(m, n);
      const int k = std::abs(m - n);
      const double L = assoc_laguerre(lo, k, x);
      const double mag = std::exp(0.5 * (log_factorial(lo) - log_factorial(lo + k)) + k * lr - 0.5 * x);
      // m >= n: alpha^{m-n}; m < n: (-alpha^*)^{n-m}.
      const cd phase = (m >= n) ? std::polar(1.0, k * th) : ((k % 2) ? -1.0 : 1.0) * std::polar(1.0, -k * th);
      D(m, n) = mag * L * phase;
    }
  return D;
}

Eigen::MatrixXcd displaced_parity(cd alpha, int cutoff) {
  Eigen::MatrixXcd P = displacement_matrix(2.0 * alpha, cutoff);
  for (int n = 1; n < cutoff; n += 2) P.col(n) *= -1.0;
  return P;
}

double wigner_numeric_1mode(const DensityMatrix& rho, cd alpha, std::vector<std::string>* warnings) {
  if (!rho.single_mode()) throw UnsupportedInput("wigner_numeric_1mode: two-mode matrix");
  leak_check(alpha, rho.dim_a, warnings);
  const Eigen::MatrixXcd P = displaced_parity(alpha, rho.dim_a);
  return (2.0 / kPi) * (rho.m.cwiseProduct(P.transpose())).sum().real();
}

double wigner_numeric_2mode(const DensityMatrix& rho, cd alpha, cd beta, std::vector<std::string>* warnings) {
  leak_check(alpha, rho.dim_a, warnings);
  leak_check(beta, rho.dim_b, warnings);
  const int da = rho.dim_a, db = rho.dim_b;
  const Eigen::MatrixXcd Pa = displaced_parity(alpha, da);
  const Eigen::MatrixXcd PbT = displaced_parity(beta, db).transpose();
  cd s = 0.0;
  for (int i = 0; i < da; ++i)
    for (int k = 0; k < da; ++k) {
      const cd pa = Pa(k, i);
      if (pa == 0.0) continue;
      s += pa * rho.m.block(i * db, k * db, db, db).cwiseProduct(PbT).sum();
    }
  return (4.0 / (kPi * kPi)) * s.real();
}

IntegrationResult integrate_wigner(const WignerField& field) {
  if (!field.consistent()) throw UnsupportedInput("integrate_wigner: grid and values disagree");
  IntegrationResult r;
  r.value = trapezoid(field.xs, field.ys, field.values);
  const std::size_t nx = field.xs.size(), ny = field.ys.size();
  if (nx >= 5 && ny >= 5 && nx % 2 == 1 && ny % 2 == 1) {
    std::vector<double> xs2, ys2, v2;
    for (std::size_t i = 0; i < nx; i += 2) xs2.push_back(field.xs[i]);
    for (std::size_t j = 0; j < ny; j += 2) ys2.push_back(field.ys[j]);
    for (std::size_t i = 0; i < nx; i += 2)
      for (std::size_t j = 0; j < ny; j += 2) v2.push_back(field.at(i, j));
    r.estimated_error = std::abs(r.value - trapezoid(xs2, ys2, v2)) / 3.0;
  }
  if (r.estimated_error > 1e-3)
    r.warning = "integrate_wigner: grid under-resolved, estimated error " + std::to_string(r.estimated_error);
  return r;
}

DensityMatrix single_mode_reference(int N, const GainParams& gain, const LossChannel& ch, int cutoff) {
  if (N < 0 || N >= cutoff) throw DomainError("single_mode_reference: seed outside cutoff");
  const FockVector v = squeeze_single_mode(fock_state(N, N + 1), gain.g, 0.0, cutoff);
  return apply_loss_kraus(DensityMatrix::from_pure(v), ch);
}

DensityMatrix collinear_reference(int N, int M, const GainParams& gain, const LossChannel& ch, int cutoff) {
  if (N < 0 || M < 0) throw DomainError("collinear_reference: negative seed");
  const TwoModeState seed = fock_state(N, M, PolarizationBasis::plus_minus(), N + 1, M + 1);
  const TwoModeState hv = rotate_basis(seed, PolarizationBasis::hv(), N + M + 1, N + M + 1);
  const TwoModeState amp = squeeze_two_mode(hv, gain.g, cutoff, cutoff);
  return apply_loss_kraus(DensityMatrix::from_pure(amp), ch);
}

DensityMatrix css_reference(const CssParams& params, const LossChannel& ch, int cutoff) {
  return apply_loss_kraus(DensityMatrix::from_pure(build_css_state(params, cutoff)), ch);
}

NoncollinearReference noncollinear_reference(int N, int M, const GainParams& gain, double phi,
                                             const LossChannel& ch, int cutoff) {
  if (N < 0 || M < 0) throw DomainError("noncollinear_reference: negative seed");
  return {pair_state(N, -gain.g, ch, cutoff), pair_state(M, gain.g, ch, cutoff), phi};
}

double wigner_numeric_noncollinear(const NoncollinearReference& ref, const PhasePoint4& pt) {
  const NoncollinearPairs p = noncollinear_pairs(pt, ref.phi);
  return wigner_numeric_2mode(ref.pair_a, p.a1, p.a2) * wigner_numeric_2mode(ref.pair_b, p.b1, p.b2);
}

}  // namespace qiopa
