#include "qiopa/channel.hpp"

#include <algorithm>
#include <cmath>

#include "qiopa/errors.hpp"
#include "qiopa/specfun.hpp"

namespace qiopa {

namespace {

// m_p(i) = sqrt(binom(i+p, p) R^p T^i): weight carrying |i+p> to |i>.
Eigen::MatrixXd shift_weights(const LossChannel& ch, int cutoff, int p_max) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(p_max + 1, cutoff);
  for (int p = 0; p <= p_max; ++p)
    for (int i = 0; i + p < cutoff; ++i)
      w(p, i) = std::sqrt(log_binomial(i + p, p).value() * std::pow(ch.R, p) * std::pow(ch.T, i));
  return w;
}

// Largest missing weight sum_{p > p_max} binom(n,p) R^p T^{n-p} over n < cutoff.
double missing_completeness(const LossChannel& ch, int cutoff, int p_max) {
  double worst = 0.0;
  for (int n = 0; n < cutoff; ++n) {
    double miss = 0.0;
    for (int p = p_max + 1; p <= n; ++p)
      miss += log_binomial(n, p).value() * std::pow(ch.R, p) * std::pow(ch.T, n - p);
    worst = std::max(worst, miss);
  }
  return worst;
}

DensityMatrix loss_on_a(const DensityMatrix& rho, const LossChannel& ch, int p_max) {
  const int da = rho.dim_a;
  const int db = rho.dim_b;
  if (p_max < 0) p_max = da - 1;
  const double miss = missing_completeness(ch, da, p_max);
  if (miss > 1e-9) throw TruncationError("apply_loss_kraus: Kraus set incomplete", miss);
  const Eigen::MatrixXd w = shift_weights(ch, da, std::min(p_max, da - 1));
  DensityMatrix out = rho;
  out.m.setZero();
  const int pm = static_cast<int>(w.rows()) - 1;
  // Blocks (i, k) of size db x db hold <i, . | rho | k, .>.
  for (int k = 0; k < da; ++k)
    for (int i = 0; i < da; ++i)
      for (int p = 0; p <= pm && i + p < da && k + p < da; ++p) {
        const double f = w(p, i) * w(p, k);
        if (f == 0.0) continue;
        out.m.block(i * db, k * db, db, db) += f * rho.m.block((i + p) * db, (k + p) * db, db, db);
      }
  return out;
}

DensityMatrix swap_modes(const DensityMatrix& rho) {
  const int da = rho.dim_a;
  const int db = rho.dim_b;
  DensityMatrix out = rho;
  out.dim_a = db;
  out.dim_b = da;
  for (int k = 0; k < da; ++k)
    for (int l = 0; l < db; ++l)
      for (int i = 0; i < da; ++i)
        for (int j = 0; j < db; ++j) out.m(j * da + i, l * da + k) = rho.m(i * db + j, k * db + l);
  return out;
}

DensityMatrix loss_on_b(const DensityMatrix& rho, const LossChannel& ch, int p_max) {
  return swap_modes(loss_on_a(swap_modes(rho), ch, p_max));
}

// B(n, k) = amplitude of |k>_sys |n-k>_env from |n>|0>.
Eigen::MatrixXcd splitter_amplitudes(const LossChannel& ch, int cutoff) {
  Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(cutoff, cutoff);
  const cd ir{0.0, std::sqrt(ch.R)};
  const double st = std::sqrt(ch.T);
  for (int n = 0; n < cutoff; ++n)
    for (int k = 0; k <= n; ++k)
      B(n, k) = std::sqrt(log_binomial(n, k).value()) * std::pow(st, k) * std::pow(ir, n - k);
  return B;
}

}  // namespace

LossChannel LossChannel::from_reflectivity(double R) {
  if (!std::isfinite(R) || R < 0.0 || R > 1.0)
    throw DomainError("LossChannel: reflectivity must lie in [0, 1]");
  return {R, 1.0 - R};
}

double KrausSet::completeness_deficit() const {
  if (ops.empty()) return 1.0;
  const auto n = ops.front().rows();
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
  for (const auto& M : ops) s += M.transpose() * M;
  return (s - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
}

KrausSet kraus_set(const LossChannel& ch, int cutoff, int p_max) {
  if (cutoff < 1) throw DomainError("kraus_set: cutoff must be positive");
  if (p_max < 0) p_max = cutoff - 1;
  KrausSet ks;
  ks.p_max = p_max;
  for (int p = 0; p <= p_max; ++p) {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(cutoff, cutoff);
    for (int n = p; n < cutoff; ++n)
      M(n - p, n) = std::sqrt(log_binomial(n, p).value() * std::pow(ch.R, p) * std::pow(ch.T, n - p));
    ks.ops.push_back(std::move(M));
  }
  return ks;
}

DensityMatrix apply_loss_kraus(const DensityMatrix& rho, const LossChannel& ch, LossTarget target,
                               int p_max) {
  if (ch.R == 0.0) return rho;
  switch (target) {
    case LossTarget::A:
      return loss_on_a(rho, ch, p_max);
    case LossTarget::B:
      if (rho.single_mode()) throw UnsupportedInput("apply_loss_kraus: single-mode state has no mode B");
      return loss_on_b(rho, ch, p_max);
    case LossTarget::Both:
      if (rho.single_mode()) return loss_on_a(rho, ch, p_max);
      return loss_on_b(loss_on_a(rho, ch, p_max), ch, p_max);
  }
  return rho;
}

DensityMatrix apply_loss_unitary(const FockVector& psi, const LossChannel& ch) {
  const int n = psi.cutoff();
  const Eigen::MatrixXcd B = splitter_amplitudes(ch, n);
  // Joint amplitudes Psi(k, e) with e = n - k the reflected count.
  Eigen::MatrixXcd joint = Eigen::MatrixXcd::Zero(n, n);
  for (int m = 0; m < n; ++m)
    for (int k = 0; k <= m; ++k) joint(k, m - k) += psi.amp(m) * B(m, k);
  DensityMatrix out;
  out.dim_a = n;
  out.dim_b = 1;
  out.m = joint * joint.adjoint();
  out.trace_deficit = psi.deficit;
  return out;
}

DensityMatrix apply_loss_unitary(const TwoModeState& psi, const LossChannel& ch, int out_a, int out_b) {
  const int da = psi.dim_a();
  const int db = psi.dim_b();
  if (out_a <= 0) out_a = da;
  if (out_b <= 0) out_b = db;
  out_a = std::min(out_a, da);
  out_b = std::min(out_b, db);
  const Eigen::MatrixXcd Ba = splitter_amplitudes(ch, da);
  const Eigen::MatrixXcd Bb = splitter_amplitudes(ch, db);
  // Rows: kept system states (k_a, k_b); columns: environment (e_a, e_b).
  Eigen::MatrixXcd joint = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(out_a) * out_b,
                                                  static_cast<Eigen::Index>(da) * db);
  for (int na = 0; na < da; ++na)
    for (int nb = 0; nb < db; ++nb) {
      const cd a = psi.amp(na, nb);
      if (a == 0.0) continue;
      for (int ka = 0; ka <= std::min(na, out_a - 1); ++ka)
        for (int kb = 0; kb <= std::min(nb, out_b - 1); ++kb)
          joint(ka * out_b + kb, (na - ka) * db + (nb - kb)) += a * Ba(na, ka) * Bb(nb, kb);
    }
  DensityMatrix out;
  out.dim_a = out_a;
  out.dim_b = out_b;
  out.m = joint * joint.adjoint();
  out.trace_deficit = std::max(0.0, 1.0 - out.trace());
  return out;
}

Eigen::MatrixXd photon_distribution(const DensityMatrix& rho) {
  Eigen::MatrixXd P(rho.dim_a, rho.dim_b);
  for (int a = 0; a < rho.dim_a; ++a)
    for (int b = 0; b < rho.dim_b; ++b) P(a, b) = rho.m(rho.index(a, b), rho.index(a, b)).real();
  return P;
}

}  // namespace qiopa
