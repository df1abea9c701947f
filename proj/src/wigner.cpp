#include "qiopa/wigner.hpp"

#include <cmath>
#include <vector>

#include "qiopa/errors.hpp"
#include "qiopa/specfun.hpp"

namespace qiopa {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Polynomial sum_{i,j} p[i][j] a^i b^j, degrees bounded by the number of derivative rounds.
using Poly = std::vector<std::vector<cd>>;

Poly make_poly(int deg) { return Poly(deg + 2, std::vector<cd>(deg + 2, 0.0)); }

// d/dx [P(a,b) f] = (P_a da + P_b db - s P) f with s = d(log f^{-1})/dx, s in {a, b}.
Poly differentiate(const Poly& P, cd da, cd db, bool s_is_a) {
  const int n = static_cast<int>(P.size());
  Poly Q = make_poly(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const cd c = P[i][j];
      if (c == 0.0) continue;
      if (i > 0) Q[i - 1][j] += c * double(i) * da;
      if (j > 0) Q[i][j - 1] += c * double(j) * db;
      if (s_is_a)
        Q[i + 1][j] -= c;
      else
        Q[i][j + 1] -= c;
    }
  return Q;
}

cd evaluate(const Poly& P, cd a, cd b) {
  cd s = 0.0;
  cd ai = 1.0;
  for (std::size_t i = 0; i < P.size(); ++i) {
    cd bj = 1.0;
    for (std::size_t j = 0; j < P.size(); ++j) {
      s += P[i][j] * ai * bj;
      bj *= b;
    }
    ai *= a;
  }
  return s;
}

void require_finite_point(double X, double Y, const char* where) {
  if (!std::isfinite(X) || !std::isfinite(Y)) throw DomainError(std::string(where) + ": non-finite point");
}

// Single mode squeezed by exp[(g/2)(a^dag^2 - a^2)] with signed gain, seeded by |N>, after loss.
double single_mode_at(int N, double g_signed, const LossChannel& ch, cd alpha) {
  const double C = std::cosh(g_signed);
  const double S = std::sinh(g_signed);
  const cd abar = alpha * C - std::conj(alpha) * S;
  if (ch.R == 0.0) {
    const double r2 = std::norm(abar);
    return (2.0 / kPi) * ((N % 2) ? -1.0 : 1.0) * laguerre(N, 4.0 * r2) * std::exp(-2.0 * r2);
  }
  if (N > 2) throw UnsupportedInput("lossy single-mode closed form covers N <= 2");
  const double eps = 0.5 * (1.0 + 2.0 * ch.R * S * S);
  const double kappa = 0.5 * ch.R * C * S;
  double w = 0.0;
  for (int n = 0; n <= N; ++n) w += LossWignerParams::c_coeff(N, n, ch.T) * i_n_integral(n, kappa, kappa, eps, abar);
  return w / kPi;
}

// Pair (first, second) amplified by exp[s g (a^dag b^dag - a b)], seeded by |N, 0>, after loss.
double pair_at(int N, double g, int s, const LossChannel& ch, cd a1, cd a2) {
  const double C = std::cosh(g);
  const double S = std::sinh(g);
  const cd z = a1 * C - double(s) * std::conj(a2) * S;
  const cd w = a2 * C - double(s) * std::conj(a1) * S;
  if (ch.R == 0.0) {
    const double z2 = std::norm(z);
    return (4.0 / (kPi * kPi)) * ((N % 2) ? -1.0 : 1.0) * laguerre(N, 4.0 * z2) *
           std::exp(-2.0 * (z2 + std::norm(w)));
  }
  if (N > 1) throw UnsupportedInput("lossy non-collinear closed form covers N, M <= 1");
  const double eps = 0.5 * (1.0 + 2.0 * ch.R * S * S);
  const double mu = double(s) * ch.R * C * S;
  double v = 0.0;
  for (int n = 0; n <= N; ++n) v += LossWignerParams::d_coeff(N, n, ch.T) * j_nm_integral(n, 0, eps, mu, z, w);
  return v / (kPi * kPi);
}

void check_seed(int N, int M) {
  if (N < 0 || M < 0) throw DomainError("seed photon numbers must be >= 0");
}

}  // namespace

LossWignerParams LossWignerParams::from(const GainParams& gain, const LossChannel& ch) {
  const double e = 0.5 * (1.0 + 2.0 * ch.R * gain.S * gain.S);
  return {e, 0.5 * ch.R * gain.C * gain.S, e, ch.R * gain.C * gain.S};
}

double LossWignerParams::c_coeff(int N, int n, double T) {
  return log_binomial(N, n).value() * ((n % 2) ? -1.0 : 1.0) * std::pow(T, n) / std::exp(log_factorial(n));
}

double LossWignerParams::d_coeff(int N, int n, double T) {
  return log_binomial(N, n).value() * std::pow(-T, n) / std::exp(log_factorial(n));
}

double i_n_integral(int n, double mu, double nu, double tau, cd z) {
  if (n < 0 || n > 2) throw UnsupportedInput("i_n_integral: n must be 0, 1 or 2");
  if (!std::isfinite(mu) || !std::isfinite(nu) || !std::isfinite(tau) || !std::isfinite(z.real()) ||
      !std::isfinite(z.imag()))
    throw DomainError("i_n_integral: non-finite argument");
  const double D = tau * tau - 4.0 * mu * nu;
  if (!(D > 0.0)) throw DomainError("i_n_integral: tau^2 - 4 mu nu must be positive");
  const cd zc = std::conj(z);
  const cd Q = (mu * z * z + nu * zc * zc + tau * z * zc) / D;
  const cd f = std::exp(-Q) / std::sqrt(D);
  const cd a = (2.0 * mu * z + tau * zc) / D;  // dQ/dz
  const cd b = (2.0 * nu * zc + tau * z) / D;  // dQ/dz*
  Poly P = make_poly(2 * n);
  P[0][0] = 1.0;
  for (int r = 0; r < n; ++r) {
    P = differentiate(P, 2.0 * mu / D, tau / D, true);
    P = differentiate(P, tau / D, 2.0 * nu / D, false);
  }
  const cd v = ((n % 2) ? -1.0 : 1.0) * evaluate(P, a, b) * f;
  return v.real();
}

double j_nm_integral(int n, int m, double tau, double mu, cd z, cd w) {
  if (n < 0 || m < 0 || n + m > 1) throw UnsupportedInput("j_nm_integral: (n, m) must be (0,0), (1,0) or (0,1)");
  if (m == 1) return j_nm_integral(1, 0, tau, mu, w, z);
  const double D = tau * tau - mu * mu;
  if (!(D > 0.0)) throw DomainError("j_nm_integral: tau^2 - mu^2 must be positive");
  const cd E = (tau * (std::norm(z) + std::norm(w)) + mu * (z * w + std::conj(z * w))) / D;
  const double j00 = std::exp(-E.real()) / D;
  if (n == 0) return j00;
  const cd a = (tau * std::conj(z) + mu * w) / D;  // dE/dz
  const cd b = (tau * z + mu * std::conj(w)) / D;  // dE/dz*
  return ((tau / D - a * b) * j00).real();
}

QuadratureDeltas collinear_deltas(const GainParams& gain, const PhasePoint2& pt) {
  const cd I{0.0, 1.0};
  const double ep = std::exp(gain.g), em = std::exp(-gain.g);
  const cd al = pt.alpha, be = pt.beta;
  QuadratureDeltas d;
  d.gamma_a_plus = (al + std::conj(be)) * em;
  d.gamma_b_plus = (std::conj(al) + be) * em;
  d.gamma_a_minus = I * (al - std::conj(be)) * ep;
  d.gamma_b_minus = I * (be - std::conj(al)) * ep;
  d.delta_a = (d.gamma_a_plus - I * d.gamma_a_minus) / std::sqrt(2.0);
  d.delta_b = (d.gamma_b_plus - I * d.gamma_b_minus) / std::sqrt(2.0);
  d.delta2 = 0.5 * (std::norm(d.gamma_a_plus) + std::norm(d.gamma_a_minus) + std::norm(d.gamma_b_plus) +
                    std::norm(d.gamma_b_minus));
  return d;
}

QuadratureDeltas noncollinear_deltas(const GainParams& gain, const PhasePoint4& pt) {
  const cd I{0.0, 1.0};
  const double ep = std::exp(gain.g), em = std::exp(-gain.g);
  QuadratureDeltas d;
  d.gamma_a_plus = (pt.alpha1 + std::conj(pt.alpha2)) * ep;
  d.gamma_a_minus = I * (pt.alpha1 - std::conj(pt.alpha2)) * em;
  d.gamma_b_plus = (pt.beta1 - std::conj(pt.beta2)) * ep;
  d.gamma_b_minus = I * (pt.beta1 + std::conj(pt.beta2)) * em;
  d.delta_a = (d.gamma_a_plus - I * d.gamma_a_minus) / std::sqrt(2.0);
  d.delta_b = (d.gamma_b_plus - I * d.gamma_b_minus) / std::sqrt(2.0);
  d.delta2 = 0.5 * (std::norm(d.gamma_a_plus) + std::norm(d.gamma_a_minus) + std::norm(d.gamma_b_plus) +
                    std::norm(d.gamma_b_minus));
  return d;
}

double w_single_mode(int N, const GainParams& gain, const LossChannel& ch, double X, double Y) {
  check_seed(N, 0);
  require_finite_point(X, Y, "w_single_mode");
  return single_mode_at(N, gain.g, ch, cd(X, Y));
}

double w_single_mode_vacuum_closed(const GainParams& gain, const LossChannel& ch, double X, double Y) {
  require_finite_point(X, Y, "w_single_mode_vacuum_closed");
  const double K = 1.0 + 4.0 * ch.T * ch.R * gain.S * gain.S;
  const double e2 = std::exp(2.0 * gain.g);
  const double q = X * X * (ch.T / e2 + ch.R) + Y * Y * (ch.T * e2 + ch.R);
  return (2.0 / kPi) / std::sqrt(K) * std::exp(-2.0 * q / K);
}

double w_collinear(int N, int M, const GainParams& gain, const LossChannel& ch, const PhasePoint2& pt) {
  check_seed(N, M);
  if (ch.R > 0.0 && (N > 2 || M > 2)) throw UnsupportedInput("lossy collinear closed form covers N, M <= 2");
  const double r = 1.0 / std::sqrt(2.0);
  const cd plus = r * (pt.alpha + pt.beta);
  const cd minus = r * (pt.alpha - pt.beta);
  return single_mode_at(N, gain.g, ch, plus) * single_mode_at(M, -gain.g, ch, minus);
}

double w_collinear_ideal_delta(int N, int M, const GainParams& gain, const PhasePoint2& pt) {
  check_seed(N, M);
  const QuadratureDeltas d = collinear_deltas(gain, pt);
  const double sgn = ((N + M) % 2) ? -1.0 : 1.0;
  return (4.0 / (kPi * kPi)) * sgn * laguerre(N, std::norm(d.delta_a + d.delta_b)) *
         laguerre(M, std::norm(d.delta_b - d.delta_a)) * std::exp(-d.delta2);
}

double w_noncollinear(int N, int M, const GainParams& gain, double phi, const LossChannel& ch,
                      const PhasePoint4& pt) {
  check_seed(N, M);
  if (ch.R == 0.0) {
    const QuadratureDeltas d = noncollinear_deltas(gain, pt);
    const cd e = std::polar(1.0, phi);
    const double sgn = ((N + M) % 2) ? -1.0 : 1.0;
    const double c = 2.0 / kPi;
    return c * c * c * c * sgn * std::exp(-2.0 * d.delta2) * laguerre(N, std::norm(d.delta_a + std::conj(e) * d.delta_b)) *
           laguerre(M, std::norm(-d.delta_a * e + d.delta_b));
  }
  if (N > 1 || M > 1) throw UnsupportedInput("lossy non-collinear closed form covers N, M <= 1");
  const NoncollinearPairs p = noncollinear_pairs(pt, phi);
  return pair_at(N, gain.g, -1, ch, p.a1, p.a2) * pair_at(M, gain.g, +1, ch, p.b1, p.b2);
}

double w_css_interference(const CssParams& params, const LossChannel& ch, double X, double Y) {
  require_finite_point(X, Y, "w_css");
  const double nn = params.normalization();
  const double a = params.alpha;
  const double st = std::sqrt(ch.T);
  const cd b1 = std::polar(st * a, params.phi);
  const cd b2 = std::polar(st * a, -params.phi);
  const cd pt(X, Y);
  const double s = std::sin(params.phi);
  const cd c = std::exp(cd(-2.0 * ch.R * a * a * s * s, ch.R * a * a * std::sin(2.0 * params.phi)));
  const cd overlap = std::exp(-0.5 * std::norm(b1) - 0.5 * std::norm(b2) + std::conj(b2) * b1);
  const cd w12 = (2.0 / kPi) * overlap * std::exp(-2.0 * (pt - b1) * (std::conj(pt) - std::conj(b2)));
  return nn * nn * double(params.sign) * (c * w12).real();
}

double w_css(const CssParams& params, const LossChannel& ch, double X, double Y) {
  require_finite_point(X, Y, "w_css");
  const double nn = params.normalization();
  const double st = std::sqrt(ch.T);
  const cd b1 = std::polar(st * params.alpha, params.phi);
  const cd b2 = std::polar(st * params.alpha, -params.phi);
  const cd pt(X, Y);
  const double diag = (2.0 / kPi) * (std::exp(-2.0 * std::norm(pt - b1)) + std::exp(-2.0 * std::norm(pt - b2)));
  return 0.5 * nn * nn * diag + w_css_interference(params, ch, X, Y);
}

double css_witness_x(const CssParams& params, const LossChannel& ch) {
  const double s = std::abs(std::sin(params.phi));
  if (ch.T == 0.0 || params.alpha == 0.0 || s == 0.0) return 0.0;
  return kPi / (4.0 * std::sqrt(ch.T) * params.alpha * s);
}

double negativity_at_origin(Family family, const WitnessParams& params, const LossChannel& ch) {
  switch (family) {
    case Family::SingleMode:
      return w_single_mode(1, params.gain, ch, 0.0, 0.0);
    case Family::Collinear:
      return w_collinear(1, 0, params.gain, ch, {0.0, 0.0});
    case Family::Noncollinear:
      return w_noncollinear(1, 0, params.gain, 0.0, ch, {0.0, 0.0, 0.0, 0.0});
    case Family::Css:
      return w_css(params.css, ch, css_witness_x(params.css, ch), 0.0);
  }
  throw UnsupportedInput("negativity_at_origin: unknown family");
}

Uncertainty quadrature_uncertainty(int N, const GainParams& gain, const LossChannel& ch) {
  if (N != 0 && N != 1) throw UnsupportedInput("quadrature_uncertainty: N must be 0 or 1");
  const double k = 2.0 * N + 1.0;
  const double e2 = std::exp(2.0 * gain.g);
  return {0.5 * std::sqrt(k * ch.T * e2 + ch.R), 0.5 * std::sqrt(k * ch.T / e2 + ch.R)};
}

namespace {

template <class F>
WignerField fill(const char* family, const std::vector<double>& xs, const std::vector<double>& ys, F f) {
  WignerField w;
  w.family = family;
  w.xs = xs;
  w.ys = ys;
  w.values.reserve(xs.size() * ys.size());
  for (double x : xs)
    for (double y : ys) w.values.push_back(f(x, y));
  return w;
}

}  // namespace

WignerField single_mode_field(int N, const GainParams& gain, const LossChannel& ch, const std::vector<double>& xs,
                              const std::vector<double>& ys) {
  WignerField w = fill("single", xs, ys, [&](double x, double y) { return w_single_mode(N, gain, ch, x, y); });
  w.params = {{"N", double(N)}, {"g", gain.g}, {"R", ch.R}};
  return w;
}

WignerField css_field(const CssParams& params, const LossChannel& ch, const std::vector<double>& xs,
                      const std::vector<double>& ys) {
  WignerField w = fill("css", xs, ys, [&](double x, double y) { return w_css(params, ch, x, y); });
  w.params = {{"alpha", params.alpha}, {"phi", params.phi}, {"sign", double(params.sign)}, {"R", ch.R}};
  return w;
}

WignerField collinear_field(int N, int M, const GainParams& gain, const LossChannel& ch,
                            const std::vector<double>& xs, const std::vector<double>& ys) {
  WignerField w = fill("collinear", xs, ys,
                       [&](double x, double y) { return w_collinear(N, M, gain, ch, collinear_projection(x, y)); });
  w.params = {{"N", double(N)}, {"M", double(M)}, {"g", gain.g}, {"R", ch.R}};
  return w;
}

WignerField noncollinear_field(int N, int M, const GainParams& gain, double phi, const LossChannel& ch,
                               const std::vector<double>& xs, const std::vector<double>& ys) {
  WignerField w = fill("noncollinear", xs, ys, [&](double x, double y) {
    return w_noncollinear(N, M, gain, phi, ch, noncollinear_phi_section(x, y, phi));
  });
  w.params = {{"N", double(N)}, {"M", double(M)}, {"g", gain.g}, {"phi", phi}, {"R", ch.R}};
  return w;
}

}  // namespace qiopa
