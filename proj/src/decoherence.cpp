#include "qiopa/decoherence.hpp"

#include <algorithm>
#include <cmath>

#include "qiopa/errors.hpp"
#include "qiopa/specfun.hpp"

namespace qiopa {

namespace {

LogScaledReal lsr(double v) { return LogScaledReal::from_double(v); }

LogScaledReal inv_fact(int n) { return LogScaledReal::from_log(-log_factorial(n)); }

}  // namespace

CssQubitParams CssQubitParams::from(const CssParams& css, const LossChannel& ch) {
  const double a2 = css.alpha * css.alpha;
  const double s = std::sin(css.phi);
  return {2.0 * ch.R * a2 * s * s, ch.R * a2 * std::sin(2.0 * css.phi), std::sqrt(ch.T) * css.alpha,
          std::sqrt(ch.R) * css.alpha};
}

CssLossyDensity css_lossy_density(const CssParams& params, const LossChannel& ch, int cutoff) {
  const double nn = params.normalization();
  const double a = params.alpha;
  if (cutoff <= 0) cutoff = static_cast<int>(std::ceil(a * a + 10.0 * a + 20.0));
  const double st = std::sqrt(ch.T);
  const FockVector b1 = build_coherent_state(std::polar(st * a, params.phi), cutoff);
  const FockVector b2 = build_coherent_state(std::polar(st * a, -params.phi), cutoff);
  const CssQubitParams q = CssQubitParams::from(params, ch);
  const cd c = std::exp(cd(-q.chi, q.psi));
  const double s = params.sign;

  CssLossyDensity out;
  out.fock.dim_a = cutoff;
  out.fock.dim_b = 1;
  const Eigen::VectorXcd& u = b1.amp;
  const Eigen::VectorXcd& v = b2.amp;
  out.fock.m = 0.5 * nn * nn *
               (u * u.adjoint() + v * v.adjoint() + s * c * (u * v.adjoint()) + s * std::conj(c) * (v * u.adjoint()));
  out.fock.trace_deficit = std::max(0.0, 1.0 - out.fock.trace());

  const cd off = s * std::exp(-q.chi) * std::polar(1.0, q.psi);
  out.qubit << 0.5, 0.5 * off, 0.5 * std::conj(off), 0.5;
  const double sp = std::sin(params.phi);
  out.orthogonal_regime = ch.T * a * a * sp * sp > 1.0;
  if (!out.orthogonal_regime)
    out.warning = "css_lossy_density: T alpha^2 sin^2 phi <= 1, qubit form is not faithful";
  return out;
}

cd equatorial_lossy_element(int i, int j, int k, int q, const GainParams& gain, double phi, const LossChannel& ch) {
  if (i < 0 || j < 0 || k < 0 || q < 0) return 0.0;
  if ((i - k) % 2 != 0 || (j - q) % 2 != 0) return 0.0;
  const double G = gain.Gamma;
  const double R = ch.R;
  const double z = R * R * G * G;
  const int s = i + j + k + q;

  LogScaledReal pre = LogScaledReal::from_log(-4.0 * std::log(gain.C) - (2.0 + 0.5 * s) * std::log1p(-z));
  pre = pre * lsr(std::sqrt(ch.T)).pow(s);
  pre = pre * LogScaledReal::from_log(0.5 * (log_factorial(i) + log_factorial(j) + log_factorial(k) + log_factorial(q)));

  const bool i_odd = i % 2 != 0;
  const bool j_odd = j % 2 != 0;
  const LogScaledReal half = lsr(G / 2.0);
  const LogScaledReal neg_half = lsr(-G / 2.0);

  LogScaledReal body;
  if (!i_odd && !j_odd) {
    body = half.pow((i + k) / 2) * neg_half.pow((j + q) / 2) * lsr(R * (i + 1.0) * (k + 1.0)) * inv_fact(i / 2) *
           inv_fact(j / 2) * inv_fact(k / 2) * inv_fact(q / 2) *
           hyp2f1_terminating_log(-i / 2.0, -k / 2.0, 1.5, z) * hyp2f1_terminating_log(-j / 2.0, -q / 2.0, 0.5, z);
  } else if (i_odd && !j_odd) {
    body = half.pow((i + k) / 2 - 1) * neg_half.pow((j + q) / 2) * inv_fact((i - 1) / 2) * inv_fact(j / 2) *
           inv_fact((k - 1) / 2) * inv_fact(q / 2) *
           hyp2f1_terminating_log(-(1.0 + i) / 2.0, -(1.0 + k) / 2.0, 0.5, z) *
           hyp2f1_terminating_log(-j / 2.0, -q / 2.0, 0.5, z);
  } else if (!i_odd && j_odd) {
    body = half.pow((i + k) / 2) * neg_half.pow((j + q) / 2 - 1) * lsr(z * (i + 1.0) * (k + 1.0)) * inv_fact(i / 2) *
           inv_fact((j - 1) / 2) * inv_fact(k / 2) * inv_fact((q - 1) / 2) *
           hyp2f1_terminating_log(-i / 2.0, -k / 2.0, 1.5, z) *
           hyp2f1_terminating_log((1.0 - j) / 2.0, (1.0 - q) / 2.0, 1.5, z);
  } else {
    body = half.pow((i + k) / 2 - 1) * neg_half.pow((j + q) / 2 - 1) * lsr(R * G * G) * inv_fact((i - 1) / 2) *
           inv_fact((j - 1) / 2) * inv_fact((k - 1) / 2) * inv_fact((q - 1) / 2) *
           hyp2f1_terminating_log(-(1.0 + i) / 2.0, -(1.0 + k) / 2.0, 0.5, z) *
           hyp2f1_terminating_log((1.0 - j) / 2.0, (1.0 - q) / 2.0, 1.5, z);
  }
  const double mag = (pre * body).value();
  return mag * std::polar(1.0, 0.5 * phi * (j + k - i - q));
}

cd hv_lossy_element(int i, int j, int k, const GainParams& gain, const LossChannel& ch, int p_max,
                    double* tail_bound) {
  if (tail_bound) *tail_bound = 0.0;
  const int l = k + j - i;
  if (i < 0 || j < 0 || k < 0 || l < 0) return 0.0;
  const int p0 = (j < i) ? 0 : j + 1 - i;
  const LogScaledReal G = lsr(gain.Gamma);
  const LogScaledReal Rr = lsr(ch.R);
  const LogScaledReal T = lsr(ch.T);
  const double log_c4 = 4.0 * std::log(gain.C);
  const bool automatic = p_max < 0;
  const int p_hi = automatic ? p0 + 100000 : p_max;

  double sum = 0.0;
  double prev = 0.0;
  double last = 0.0;
  for (int p = p0; p <= p_hi; ++p) {
    if (p + i == 0 || p + k == 0) continue;
    LogScaledReal t = G.pow(2 * p + i + k - 2) * Rr.pow(2 * p + i - 1 - j) * T.pow(k + j);
    t = t * LogScaledReal::from_log(-log_c4 + 0.5 * std::log(double(p + i)) + 0.5 * std::log(double(p + k)));
    t = t * (log_binomial(p + i, i) * log_binomial(p + i - 1, j) * log_binomial(p + k, k) *
             log_binomial(p + k - 1, k + j - i))
                .sqrt();
    const double v = t.value();
    sum += v;
    prev = last;
    last = v;
    if (t.is_zero() && p > p0 + 2) break;
    if (automatic && p > p0 + 2 && std::abs(v) <= 1e-17 * std::abs(sum) && std::abs(v) <= std::abs(prev)) break;
  }
  if (tail_bound) {
    const double r = (prev != 0.0) ? std::abs(last / prev) : 0.0;
    *tail_bound = (r < 1.0) ? std::abs(last) * r / (1.0 - r) : INFINITY;
  }
  return sum;
}

DensityMatrix equatorial_lossy_density(const GainParams& gain, double phi, const LossChannel& ch, int cutoff) {
  DensityMatrix d;
  d.dim_a = d.dim_b = cutoff;
  d.m = Eigen::MatrixXcd::Zero(cutoff * cutoff, cutoff * cutoff);
  for (int i = 0; i < cutoff; ++i)
    for (int j = 0; j < cutoff; ++j)
      for (int k = i % 2; k < cutoff; k += 2)
        for (int q = j % 2; q < cutoff; q += 2)
          d.m(d.index(i, j), d.index(k, q)) = equatorial_lossy_element(i, j, k, q, gain, phi, ch);
  d.trace_deficit = std::max(0.0, 1.0 - d.trace());
  return d;
}

DensityMatrix equatorial_perp_lossy_density(const GainParams& gain, double phi, const LossChannel& ch, int cutoff) {
  // The orthogonal macrostate is the mode-swapped image of the one at pi - phi.
  const double phi2 = M_PI - phi;
  DensityMatrix d;
  d.dim_a = d.dim_b = cutoff;
  d.m = Eigen::MatrixXcd::Zero(cutoff * cutoff, cutoff * cutoff);
  for (int i = 0; i < cutoff; ++i)
    for (int j = 0; j < cutoff; ++j)
      for (int k = i % 2; k < cutoff; k += 2)
        for (int q = j % 2; q < cutoff; q += 2)
          d.m(d.index(i, j), d.index(k, q)) = equatorial_lossy_element(j, i, q, k, gain, phi2, ch);
  d.trace_deficit = std::max(0.0, 1.0 - d.trace());
  return d;
}

DensityMatrix hv_lossy_density(const GainParams& gain, HvSeed seed, const LossChannel& ch, int cutoff) {
  DensityMatrix d;
  d.dim_a = d.dim_b = cutoff;
  d.m = Eigen::MatrixXcd::Zero(cutoff * cutoff, cutoff * cutoff);
  for (int i = 0; i < cutoff; ++i)
    for (int j = 0; j < cutoff; ++j)
      for (int k = 0; k < cutoff; ++k) {
        const int l = k + j - i;
        if (l < 0 || l >= cutoff) continue;
        const cd v = hv_lossy_element(i, j, k, gain, ch);
        if (seed == HvSeed::H)
          d.m(d.index(i, j), d.index(k, l)) = v;
        else
          d.m(d.index(j, i), d.index(l, k)) = v;
      }
  d.trace_deficit = std::max(0.0, 1.0 - d.trace());
  return d;
}

}  // namespace qiopa
