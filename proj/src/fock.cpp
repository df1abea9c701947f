#include "qiopa/fock.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "qiopa/errors.hpp"
#include "qiopa/specfun.hpp"

namespace qiopa {

namespace {

constexpr cd I{0.0, 1.0};

double norm2(const Eigen::VectorXcd& v) { return v.squaredNorm(); }

double deficit_of(double n2) { return std::max(0.0, 1.0 - n2); }

void check_cutoff(int cutoff, const char* where) {
  if (cutoff < 1) throw DomainError(std::string(where) + ": cutoff must be positive");
}

Eigen::VectorXcd flatten(const Eigen::MatrixXcd& amp) {
  const int da = static_cast<int>(amp.rows());
  const int db = static_cast<int>(amp.cols());
  Eigen::VectorXcd v(static_cast<Eigen::Index>(da) * db);
  for (int a = 0; a < da; ++a)
    for (int b = 0; b < db; ++b) v(a * db + b) = amp(a, b);
  return v;
}

// Cutoff at which the geometric tail (n + 1) Gamma^n / (1 - Gamma^2) falls below the target.
int tail_cutoff(const GainParams& gain, double max_deficit) {
  const double G = gain.Gamma;
  if (G <= 0.0) return 2;
  const double target = 0.1 * std::max(max_deficit, 1e-300) * (1.0 - G * G);
  int n = 2;
  while (n < 100000 && std::log(n + 1.0) + n * std::log(G) > std::log(target)) ++n;
  return n;
}

template <class Build>
TwoModeState with_escalation(Build build, const GainParams& gain, int cutoff, double max_deficit, const char* where) {
  const bool automatic = cutoff <= 0;
  TwoModeState s = build(cutoff);
  if (s.deficit <= max_deficit) return s;
  if (automatic) {
    s = build(std::max(2 * s.dim_a(), tail_cutoff(gain, max_deficit)));
    if (s.deficit <= max_deficit) return s;
  }
  throw TruncationError(std::string(where) + ": truncation deficit above bound", s.deficit);
}

// Magnitudes |e^{-|b|^2/2} b^n / sqrt(n!)| in log form.
double log_coherent_weight(double r, int n) {
  if (r == 0.0) return n == 0 ? 0.0 : -INFINITY;
  return -0.5 * r * r + n * std::log(r) - 0.5 * log_factorial(n);
}

FockVector seed_from_coefficients(int p, int cutoff, const std::vector<cd>& coeff_by_k,
                                  const std::vector<double>& log_mag_by_k) {
  const int kmax = p / 2;
  double top = -INFINITY;
  for (int k = 0; k <= kmax; ++k) top = std::max(top, log_mag_by_k[k]);
  Eigen::VectorXcd full = Eigen::VectorXcd::Zero(p + 1);
  for (int k = 0; k <= kmax; ++k)
    full(p - 2 * k) = coeff_by_k[k] * std::exp(log_mag_by_k[k] - top);
  full /= full.norm();
  FockVector out;
  if (cutoff <= 0) cutoff = p + 1;
  out.amp = Eigen::VectorXcd::Zero(cutoff);
  const int keep = std::min(cutoff, p + 1);
  out.amp.head(keep) = full.head(keep);
  out.deficit = deficit_of(norm2(out.amp));
  return out;
}

// Hermitian generator A with exp(iA) = M for a 2x2 unitary M.
Eigen::Matrix2cd unitary_log(const Eigen::Matrix2cd& M) {
  Eigen::ComplexSchur<Eigen::Matrix2cd> schur(M);
  const Eigen::Matrix2cd& Q = schur.matrixU();
  const Eigen::Matrix2cd& T = schur.matrixT();
  Eigen::Matrix2cd D = Eigen::Matrix2cd::Zero();
  D(0, 0) = std::arg(T(0, 0));
  D(1, 1) = std::arg(T(1, 1));
  return Q * D * Q.adjoint();
}

}  // namespace

GainParams GainParams::from_gain(double g) {
  if (!std::isfinite(g) || g < 0.0) throw DomainError("GainParams: gain must be finite and >= 0");
  GainParams p;
  p.g = g;
  p.C = std::cosh(g);
  p.S = std::sinh(g);
  p.Gamma = std::tanh(g);
  p.mbar = p.S * p.S;
  return p;
}

Eigen::Matrix2cd PolarizationBasis::creation_rows() const {
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd U;
  switch (kind) {
    case BasisKind::HV:
      U << 1.0, 0.0, 0.0, 1.0;
      break;
    case BasisKind::PlusMinus:
      U << r, r, r, -r;
      break;
    case BasisKind::Equatorial:
      U << r * std::exp(I * phi), r, r, -r * std::exp(-I * phi);
      break;
  }
  return U;
}

DensityMatrix DensityMatrix::from_pure(const FockVector& v) {
  DensityMatrix d;
  d.dim_a = v.cutoff();
  d.dim_b = 1;
  d.m = v.amp * v.amp.adjoint();
  d.trace_deficit = v.deficit;
  return d;
}

DensityMatrix DensityMatrix::from_pure(const TwoModeState& s) {
  DensityMatrix d;
  d.dim_a = s.dim_a();
  d.dim_b = s.dim_b();
  const Eigen::VectorXcd v = flatten(s.amp);
  d.m = v * v.adjoint();
  d.trace_deficit = s.deficit;
  return d;
}

double CssParams::normalization() const {
  if (!(alpha >= 0.0) || !std::isfinite(alpha) || !std::isfinite(phi))
    throw DomainError("CssParams: alpha must be finite and >= 0");
  if (sign != 1 && sign != -1) throw DomainError("CssParams: sign must be +1 or -1");
  const double s = std::sin(phi);
  const double x = 2.0 * alpha * alpha * s * s;
  const double y = alpha * alpha * std::sin(2.0 * phi);
  double v;
  if (sign > 0) {
    v = 1.0 + std::exp(-x) * std::cos(y);
  } else {
    const double h = std::sin(0.5 * y);
    v = -std::expm1(-x) * std::cos(y) + 2.0 * h * h;
  }
  if (!(v > 1e-300)) throw DomainError("CssParams: superposition vanishes identically");
  return 1.0 / std::sqrt(v);
}

int default_cutoff(const GainParams& gain, double q) {
  return static_cast<int>(std::ceil(q * gain.mbar + 25.0));
}

TwoModeState build_collinear_macrostate(const GainParams& gain, MacroSeed seed, int cutoff,
                                        double max_deficit) {
  auto build = [&](int cut) {
    if (cut <= 0) cut = default_cutoff(gain);
    check_cutoff(cut, "build_collinear_macrostate");
    Eigen::MatrixXcd plus = Eigen::MatrixXcd::Zero(cut, cut);
    const LogScaledReal half_gamma = LogScaledReal::from_double(gain.Gamma / 2.0);
    const double log_c2 = 2.0 * std::log(gain.C);
    for (int i = 0; 2 * i + 1 < cut; ++i) {
      for (int j = 0; 2 * j < cut; ++j) {
        LogScaledReal a = half_gamma.pow(i + j);
        if (a.is_zero()) continue;
        a.log_magnitude += 0.5 * log_factorial(2 * i + 1) + 0.5 * log_factorial(2 * j) -
                           log_factorial(i) - log_factorial(j) - log_c2;
        plus(2 * i + 1, 2 * j) = ((j % 2) ? -1.0 : 1.0) * a.value();
      }
    }
    // Minus carries the +g squeeze on the even mode and -g on the odd one.
    Eigen::MatrixXcd minus = plus.transpose();
    for (int r = 0; r < cut; ++r)
      for (int c = 0; c < cut; ++c)
        if (((r / 2) + (c / 2)) % 2) minus(r, c) = -minus(r, c);
    TwoModeState s;
    s.basis = PolarizationBasis::plus_minus();
    switch (seed.kind) {
      case MacroSeed::Kind::Plus:
        s.amp = plus;
        break;
      case MacroSeed::Kind::Minus:
        s.amp = minus;
        break;
      case MacroSeed::Kind::Equatorial:
        s.amp = std::cos(seed.phi / 2.0) * plus + I * std::sin(seed.phi / 2.0) * minus;
        break;
    }
    s.deficit = deficit_of(s.amp.squaredNorm());
    return s;
  };
  return with_escalation(build, gain, cutoff, max_deficit, "build_collinear_macrostate");
}

TwoModeState build_hv_macrostate(const GainParams& gain, HvSeed seed, int cutoff,
                                 double max_deficit) {
  auto build = [&](int cut) {
    if (cut <= 0) cut = default_cutoff(gain);
    check_cutoff(cut, "build_hv_macrostate");
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(cut, cut);
    const LogScaledReal gamma = LogScaledReal::from_double(gain.Gamma);
    const double log_c2 = 2.0 * std::log(gain.C);
    for (int n = 0; n + 1 < cut; ++n) {
      LogScaledReal a = gamma.pow(n);
      if (a.is_zero()) continue;
      a.log_magnitude += 0.5 * std::log(n + 1.0) - log_c2;
      h(n + 1, n) = a.value();
    }
    TwoModeState s;
    s.basis = PolarizationBasis::hv();
    s.amp = (seed == HvSeed::H) ? h : Eigen::MatrixXcd(h.transpose());
    s.deficit = deficit_of(s.amp.squaredNorm());
    return s;
  };
  return with_escalation(build, gain, cutoff, max_deficit, "build_hv_macrostate");
}

FockVector build_coherent_state(cd beta, int cutoff) {
  check_cutoff(cutoff, "build_coherent_state");
  FockVector v;
  v.amp = Eigen::VectorXcd::Zero(cutoff);
  const double r = std::abs(beta);
  const double th = std::arg(beta);
  for (int n = 0; n < cutoff; ++n) {
    const double l = log_coherent_weight(r, n);
    if (std::isinf(l)) continue;
    v.amp(n) = std::exp(l) * std::exp(I * (n * th));
  }
  v.deficit = deficit_of(norm2(v.amp));
  return v;
}

FockVector build_css_state(const CssParams& params, int cutoff) {
  const double norm = params.normalization();
  const double a = params.alpha;
  if (cutoff <= 0) cutoff = static_cast<int>(std::ceil(a * a + 10.0 * a + 20.0));
  check_cutoff(cutoff, "build_css_state");
  FockVector v;
  v.amp = Eigen::VectorXcd::Zero(cutoff);
  for (int n = 0; n < cutoff; ++n) {
    const double l = log_coherent_weight(a, n);
    if (std::isinf(l)) continue;
    const cd phase = std::exp(I * (n * params.phi)) + double(params.sign) * std::exp(-I * (n * params.phi));
    v.amp(n) = norm / std::sqrt(2.0) * std::exp(l) * phase;
  }
  v.deficit = deficit_of(norm2(v.amp));
  return v;
}

FockVector build_photon_subtracted_seed(int p, double s, double theta, int cutoff) {
  if (p < 0) throw DomainError("build_photon_subtracted_seed: p must be >= 0");
  const int kmax = p / 2;
  const double x = std::sinh(s) * std::cosh(s);
  std::vector<cd> coeff(kmax + 1);
  std::vector<double> logm(kmax + 1);
  for (int k = 0; k <= kmax; ++k) {
    coeff[k] = ((k % 2) ? -1.0 : 1.0) * std::exp(I * (k * theta));
    logm[k] = log_factorial(p) - k * std::log(2.0) - log_factorial(k) - 0.5 * log_factorial(p - 2 * k) +
              (k == 0 ? 0.0 : (x == 0.0 ? -INFINITY : k * std::log(std::abs(x))));
    if (x < 0.0 && k % 2) coeff[k] = -coeff[k];
  }
  return seed_from_coefficients(p, cutoff, coeff, logm);
}

FockVector build_photon_subtracted_seed_exact(int p, double s, double theta, int cutoff) {
  if (p < 0) throw DomainError("build_photon_subtracted_seed_exact: p must be >= 0");
  if (p >= 1 && s == 0.0) throw DomainError("build_photon_subtracted_seed_exact: a^p|0> vanishes");
  const int kmax = p / 2;
  const double coth = (s == 0.0) ? 0.0 : 1.0 / std::tanh(s);
  std::vector<cd> coeff(kmax + 1);
  std::vector<double> logm(kmax + 1);
  for (int k = 0; k <= kmax; ++k) {
    coeff[k] = std::exp(-I * (k * theta)) * ((coth < 0.0 && k % 2) ? -1.0 : 1.0);
    logm[k] = log_factorial(p) - k * std::log(2.0) - log_factorial(k) - 0.5 * log_factorial(p - 2 * k) +
              (k == 0 ? 0.0 : k * std::log(std::abs(coth)));
  }
  return seed_from_coefficients(p, cutoff, coeff, logm);
}

FockVector photon_subtracted_squeezed_vacuum(int p, double s, double theta, int cutoff) {
  if (p < 0) throw DomainError("photon_subtracted_squeezed_vacuum: p must be >= 0");
  check_cutoff(cutoff, "photon_subtracted_squeezed_vacuum");
  const int big = cutoff + p;
  FockVector v = squeeze_single_mode(fock_state(0, 1), s, theta, big);
  Eigen::VectorXcd w = v.amp;
  for (int r = 0; r < p; ++r) {
    Eigen::VectorXcd next = Eigen::VectorXcd::Zero(big);
    for (int n = 1; n < big; ++n) next(n - 1) = std::sqrt(double(n)) * w(n);
    w = next;
  }
  const double nrm = w.norm();
  if (nrm == 0.0) throw DomainError("photon_subtracted_squeezed_vacuum: state vanishes");
  FockVector out;
  out.amp = w.head(cutoff) / nrm;
  out.deficit = deficit_of(norm2(out.amp));
  return out;
}

FockVector fock_state(int n, int cutoff) {
  if (n < 0 || n >= cutoff) throw DomainError("fock_state: photon number outside cutoff");
  FockVector v;
  v.amp = Eigen::VectorXcd::Zero(cutoff);
  v.amp(n) = 1.0;
  return v;
}

TwoModeState fock_state(int na, int nb, PolarizationBasis basis, int cutoff_a, int cutoff_b) {
  if (na < 0 || nb < 0 || na >= cutoff_a || nb >= cutoff_b)
    throw DomainError("fock_state: photon number outside cutoff");
  TwoModeState s;
  s.amp = Eigen::MatrixXcd::Zero(cutoff_a, cutoff_b);
  s.amp(na, nb) = 1.0;
  s.basis = basis;
  return s;
}

FockVector squeeze_single_mode(const FockVector& in, double s, double theta, int cutoff) {
  check_cutoff(cutoff, "squeeze_single_mode");
  const double G = std::tanh(s);
  const double C = std::cosh(s);
  const int din = in.cutoff();

  // exp[-(e^{-i theta} G / 2) a^2]: finite on the input space.
  Eigen::VectorXcd w = in.amp;
  Eigen::VectorXcd term = in.amp;
  const cd lower = -std::exp(-I * theta) * G / 2.0;
  for (int k = 0; term.squaredNorm() > 0.0 && k <= din; ++k) {
    Eigen::VectorXcd next = Eigen::VectorXcd::Zero(din);
    for (int n = 2; n < din; ++n) next(n - 2) = std::sqrt(double(n) * (n - 1)) * term(n);
    term = next * (lower / double(k + 1));
    w += term;
  }
  for (int n = 0; n < din; ++n) w(n) *= std::exp(-(n + 0.5) * std::log(C));

  // exp[(e^{i theta} G / 2) a^dag^2] into the output space.
  FockVector out;
  out.amp = Eigen::VectorXcd::Zero(cutoff);
  const int keep = std::min(din, cutoff);
  term = Eigen::VectorXcd::Zero(cutoff);
  term.head(keep) = w.head(keep);
  out.amp = term;
  const cd raise = std::exp(I * theta) * G / 2.0;
  for (int k = 0; k <= cutoff / 2 + 1; ++k) {
    Eigen::VectorXcd next = Eigen::VectorXcd::Zero(cutoff);
    for (int n = 0; n + 2 < cutoff; ++n) next(n + 2) = std::sqrt(double(n + 1) * (n + 2)) * term(n);
    term = next * (raise / double(k + 1));
    if (term.squaredNorm() == 0.0) break;
    out.amp += term;
  }
  out.deficit = deficit_of(norm2(out.amp));
  return out;
}

TwoModeState squeeze_two_mode(const TwoModeState& in, double g, int cutoff_a, int cutoff_b) {
  check_cutoff(cutoff_a, "squeeze_two_mode");
  check_cutoff(cutoff_b, "squeeze_two_mode");
  const double G = std::tanh(g);
  const double C = std::cosh(g);
  const int da = in.dim_a();
  const int db = in.dim_b();

  Eigen::MatrixXcd w = in.amp;
  Eigen::MatrixXcd term = in.amp;
  for (int k = 0; term.squaredNorm() > 0.0 && k <= std::min(da, db); ++k) {
    Eigen::MatrixXcd next = Eigen::MatrixXcd::Zero(da, db);
    for (int n = 1; n < da; ++n)
      for (int m = 1; m < db; ++m) next(n - 1, m - 1) = std::sqrt(double(n) * m) * term(n, m);
    term = next * (-G / double(k + 1));
    w += term;
  }
  for (int n = 0; n < da; ++n)
    for (int m = 0; m < db; ++m) w(n, m) *= std::exp(-(n + m + 1.0) * std::log(C));

  TwoModeState out;
  out.basis = in.basis;
  term = Eigen::MatrixXcd::Zero(cutoff_a, cutoff_b);
  const int ka = std::min(da, cutoff_a);
  const int kb = std::min(db, cutoff_b);
  term.topLeftCorner(ka, kb) = w.topLeftCorner(ka, kb);
  out.amp = term;
  for (int k = 0; k <= std::min(cutoff_a, cutoff_b); ++k) {
    Eigen::MatrixXcd next = Eigen::MatrixXcd::Zero(cutoff_a, cutoff_b);
    for (int n = 0; n + 1 < cutoff_a; ++n)
      for (int m = 0; m + 1 < cutoff_b; ++m)
        next(n + 1, m + 1) = std::sqrt(double(n + 1) * (m + 1)) * term(n, m);
    term = next * (G / double(k + 1));
    if (term.squaredNorm() == 0.0) break;
    out.amp += term;
  }
  out.deficit = deficit_of(out.amp.squaredNorm());
  return out;
}

TwoModeState rotate_basis(const TwoModeState& in, PolarizationBasis target, int cutoff_a,
                          int cutoff_b) {
  if (cutoff_a <= 0) cutoff_a = in.dim_a();
  if (cutoff_b <= 0) cutoff_b = in.dim_b();
  // Source creation operators in terms of target ones: c_k^dag = sum_l M(k,l) d_l^dag.
  const Eigen::Matrix2cd M = in.basis.creation_rows() * target.creation_rows().adjoint();
  // U d_j^dag U^dag = sum_l M(j,l) d_l^dag for U = exp(i sum A_kl d_k^dag d_l), exp(iA) = M^T.
  const Eigen::Matrix2cd A = unitary_log(M.transpose());

  TwoModeState out;
  out.basis = target;
  out.amp = Eigen::MatrixXcd::Zero(cutoff_a, cutoff_b);
  const int da = in.dim_a();
  const int db = in.dim_b();
  for (int N = 0; N <= da + db - 2; ++N) {
    // Block basis |n, N-n>, n = 0..N.
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(N + 1);
    bool any = false;
    for (int n = std::max(0, N - db + 1); n <= std::min(N, da - 1); ++n) {
      v(n) = in.amp(n, N - n);
      any = any || v(n) != 0.0;
    }
    if (!any) continue;
    Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(N + 1, N + 1);
    for (int n = 0; n <= N; ++n) {
      G(n, n) = A(0, 0) * double(n) + A(1, 1) * double(N - n);
      if (n + 1 <= N) {
        const double f = std::sqrt(double(n + 1) * (N - n));
        G(n + 1, n) += A(0, 1) * f;  // d_1^dag d_2
        G(n, n + 1) += A(1, 0) * f;  // d_2^dag d_1
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G);
    const Eigen::VectorXcd phases = (I * es.eigenvalues().cast<cd>()).array().exp();
    const Eigen::VectorXcd w = es.eigenvectors() * (phases.asDiagonal() * (es.eigenvectors().adjoint() * v));
    for (int n = 0; n <= N; ++n)
      if (n < cutoff_a && N - n < cutoff_b) out.amp(n, N - n) = w(n);
  }
  out.deficit = deficit_of(out.amp.squaredNorm());
  return out;
}

TwoModeState amplify_collinear(const TwoModeState& seed_pm, const GainParams& gain, int cutoff) {
  if (seed_pm.basis.kind != BasisKind::PlusMinus)
    throw UnsupportedInput("amplify_collinear: seed must be given in the plus/minus basis");
  check_cutoff(cutoff, "amplify_collinear");
  const int da = seed_pm.dim_a();
  const int db = seed_pm.dim_b();
  Eigen::MatrixXcd Sp(cutoff, da), Sm(cutoff, db);
  for (int n = 0; n < da; ++n) Sp.col(n) = squeeze_single_mode(fock_state(n, da), gain.g, 0.0, cutoff).amp;
  for (int n = 0; n < db; ++n) Sm.col(n) = squeeze_single_mode(fock_state(n, db), gain.g, M_PI, cutoff).amp;
  TwoModeState out;
  out.basis = seed_pm.basis;
  out.amp = Sp * seed_pm.amp * Sm.transpose();
  out.deficit = deficit_of(out.amp.squaredNorm());
  return out;
}

MeanPhotons mean_photons_and_visibility(const GainParams& gain, double phi) {
  const double m = gain.mbar;
  const double c = std::cos(phi / 2.0);
  const double s = std::sin(phi / 2.0);
  return {m + (2.0 * m + 1.0) * c * c, m + (2.0 * m + 1.0) * s * s, (2.0 * m + 1.0) / (4.0 * m + 1.0)};
}

std::pair<double, double> mean_photons(const TwoModeState& s) {
  double na = 0.0, nb = 0.0;
  for (int a = 0; a < s.dim_a(); ++a)
    for (int b = 0; b < s.dim_b(); ++b) {
      const double p = std::norm(s.amp(a, b));
      na += a * p;
      nb += b * p;
    }
  return {na, nb};
}

std::pair<double, double> mean_photons(const DensityMatrix& rho) {
  double na = 0.0, nb = 0.0;
  for (int a = 0; a < rho.dim_a; ++a)
    for (int b = 0; b < rho.dim_b; ++b) {
      const double p = rho.m(rho.index(a, b), rho.index(a, b)).real();
      na += a * p;
      nb += b * p;
    }
  return {na, nb};
}

DensityMatrix partial_trace(const DensityMatrix& rho, Mode keep) {
  DensityMatrix out;
  out.trace_deficit = rho.trace_deficit;
  out.dim_b = 1;
  if (keep == Mode::A) {
    out.dim_a = rho.dim_a;
    out.m = Eigen::MatrixXcd::Zero(rho.dim_a, rho.dim_a);
    for (int i = 0; i < rho.dim_a; ++i)
      for (int k = 0; k < rho.dim_a; ++k) {
        cd s = 0.0;
        for (int j = 0; j < rho.dim_b; ++j) s += rho.m(rho.index(i, j), rho.index(k, j));
        out.m(i, k) = s;
      }
  } else {
    out.dim_a = rho.dim_b;
    out.m = Eigen::MatrixXcd::Zero(rho.dim_b, rho.dim_b);
    for (int j = 0; j < rho.dim_b; ++j)
      for (int l = 0; l < rho.dim_b; ++l) {
        cd s = 0.0;
        for (int i = 0; i < rho.dim_a; ++i) s += rho.m(rho.index(i, j), rho.index(i, l));
        out.m(j, l) = s;
      }
  }
  return out;
}

}  // namespace qiopa
