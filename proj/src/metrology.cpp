#include "qiopa/metrology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qiopa/decoherence.hpp"
#include "qiopa/errors.hpp"

namespace qiopa {

namespace {

constexpr double kClamp = -1e-10;
constexpr double kInvalid = -1e-6;

double clamp_eigen(double v, const char* who) {
  if (v < kInvalid) throw InvalidState(std::string(who) + ": eigenvalue " + std::to_string(v) + " below -1e-6");
  return v < kClamp ? 0.0 : std::max(v, 0.0);
}

// Clamps, then zeroes eigenvalues within rounding noise of the largest one so that
// rank-deficient inputs do not pick up sqrt(eps)-sized contributions.
Eigen::VectorXd clean_spectrum(const Eigen::VectorXd& ev, const char* who) {
  Eigen::VectorXd out(ev.size());
  if (ev.size() == 0) return out;
  const double floor = ev.size() * std::numeric_limits<double>::epsilon() * ev.cwiseAbs().maxCoeff();
  for (int i = 0; i < ev.size(); ++i) {
    const double v = clamp_eigen(ev(i), who);
    out(i) = v <= floor ? 0.0 : v;
  }
  return out;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

std::vector<std::vector<int>> joint_blocks(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  const int n = static_cast<int>(a.rows());
  UnionFind uf(n);
  std::vector<bool> used(n, false);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (a(i, j) != 0.0 || b(i, j) != 0.0) {
        used[i] = used[j] = true;
        if (i != j) uf.unite(i, j);
      }
  std::vector<std::vector<int>> by_root(n);
  for (int i = 0; i < n; ++i)
    if (used[i]) by_root[uf.find(i)].push_back(i);
  std::vector<std::vector<int>> out;
  for (auto& v : by_root)
    if (!v.empty()) out.push_back(std::move(v));
  return out;
}

Eigen::MatrixXcd take(const Eigen::MatrixXcd& m, const std::vector<int>& idx) {
  const int n = static_cast<int>(idx.size());
  Eigen::MatrixXcd out(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) out(i, j) = m(idx[i], idx[j]);
  return out;
}

void check_spectrum(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().size() > 0) clamp_eigen(es.eigenvalues().minCoeff(), "fidelity");
}

double sqrt_fidelity_block(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma) {
  check_spectrum(sigma);
  const Eigen::MatrixXcd s = hermitian_sqrt(rho);
  Eigen::MatrixXcd inner = s * sigma * s;
  inner = 0.5 * (inner + inner.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(inner, Eigen::EigenvaluesOnly);
  return clean_spectrum(es.eigenvalues(), "fidelity").cwiseSqrt().sum();
}

DensityMatrix crop(const DensityMatrix& rho, int cut) {
  DensityMatrix out;
  out.dim_a = out.dim_b = cut;
  out.m.resize(cut * cut, cut * cut);
  for (int i = 0; i < cut; ++i)
    for (int j = 0; j < cut; ++j)
      for (int k = 0; k < cut; ++k)
        for (int l = 0; l < cut; ++l) out.m(out.index(i, j), out.index(k, l)) = rho(i, j, k, l);
  out.trace_deficit = std::max(0.0, 1.0 - out.trace());
  return out;
}

DensityMatrix kraus_fallback(const TwoModeState& s, const LossChannel& ch, int cut) {
  return crop(apply_loss_kraus(DensityMatrix::from_pure(s), ch), cut);
}

}  // namespace

Eigen::MatrixXcd hermitian_sqrt(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  const Eigen::VectorXd ev = clean_spectrum(es.eigenvalues(), "hermitian_sqrt").cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim_a != sigma.dim_a || rho.dim_b != sigma.dim_b || rho.m.rows() != sigma.m.rows() ||
      rho.m.cols() != sigma.m.cols() || rho.m.rows() != rho.m.cols())
    throw UnsupportedInput("fidelity: mismatched truncations");
  double total = 0.0;
  for (const auto& idx : joint_blocks(rho.m, sigma.m))
    total += sqrt_fidelity_block(take(rho.m, idx), take(sigma.m, idx));
  return std::clamp(total * total, 0.0, 1.0);
}

double bures_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return std::sqrt(std::max(0.0, 1.0 - std::sqrt(fidelity(rho, sigma))));
}

CssBures css_bures_analytic(double alpha, double phi, const LossChannel& ch) {
  const double s = std::sin(phi);
  const double a2s2 = alpha * alpha * s * s;
  CssBures out;
  out.components = std::sqrt(-std::expm1(-2.0 * ch.T * a2s2));
  const double root_f = std::sqrt(-std::expm1(-4.0 * ch.R * a2s2));
  out.superpositions = std::sqrt(std::max(0.0, 1.0 - root_f));
  if (ch.T * a2s2 <= 1.0) out.warning = "css_bures_analytic: T alpha^2 sin^2 phi <= 1, superposition branch is approximate";
  return out;
}

OFilterPovm ofilter_povm(const OFilterConfig& cfg, int cutoff) { return ofilter_povm(cfg, cutoff, cutoff); }

OFilterPovm ofilter_povm(const OFilterConfig& cfg, int dim_a, int dim_b) {
  if (cfg.k < 0) throw DomainError("ofilter_povm: k must be non-negative");
  OFilterPovm p;
  const int n = dim_a * dim_b;
  p.plus = Eigen::VectorXd::Zero(n);
  p.minus = Eigen::VectorXd::Zero(n);
  p.inconclusive = Eigen::VectorXd::Zero(n);
  for (int a = 0; a < dim_a; ++a)
    for (int b = 0; b < dim_b; ++b) {
      const int i = a * dim_b + b;
      if (a - b > cfg.k)
        p.plus(i) = 1.0;
      else if (b - a > cfg.k)
        p.minus(i) = 1.0;
      else
        p.inconclusive(i) = 1.0;
    }
  return p;
}

double ofilter_success_probability(const DensityMatrix& rho, const OFilterConfig& cfg) {
  const OFilterPovm p = ofilter_povm(cfg, rho.dim_a, rho.dim_b);
  const Eigen::VectorXd diag = rho.m.diagonal().real();
  return std::clamp(diag.dot(p.plus + p.minus), 0.0, 1.0);
}

DensityMatrix ofilter_project(const DensityMatrix& rho, const OFilterConfig& cfg) {
  const OFilterPovm p = ofilter_povm(cfg, rho.dim_a, rho.dim_b);
  const Eigen::VectorXd keep = p.plus + p.minus;
  DensityMatrix out = rho;
  out.m = keep.asDiagonal() * rho.m * keep.asDiagonal();
  const double tr = out.trace();
  if (!(tr > 1e-300)) throw DegenerateFilter("ofilter_project: conclusive outcomes have zero probability");
  out.m /= tr;
  out.trace_deficit = 0.0;
  return out;
}

double macroqubit_mean_photons(const GainParams& gain) { return 4.0 * gain.mbar + 1.0; }

std::pair<DensityMatrix, DensityMatrix> macroqubit_pair(const GainParams& gain, const LossChannel& ch,
                                                        MacroBasis basis, double phi, int cutoff) {
  try {
    if (basis == MacroBasis::Equatorial)
      return {equatorial_lossy_density(gain, phi, ch, cutoff), equatorial_perp_lossy_density(gain, phi, ch, cutoff)};
    return {hv_lossy_density(gain, HvSeed::H, ch, cutoff), hv_lossy_density(gain, HvSeed::V, ch, cutoff)};
  } catch (const DomainError&) {
  }
  const int big = 2 * cutoff;
  if (basis == MacroBasis::Equatorial) {
    const PolarizationBasis eq = PolarizationBasis::equatorial(phi);
    const auto a = rotate_basis(build_collinear_macrostate(gain, MacroSeed::equatorial(phi), big, 1.0), eq);
    const auto b = rotate_basis(build_collinear_macrostate(gain, MacroSeed::equatorial(phi + M_PI), big, 1.0), eq);
    return {kraus_fallback(a, ch, cutoff), kraus_fallback(b, ch, cutoff)};
  }
  return {kraus_fallback(build_hv_macrostate(gain, HvSeed::H, big, 1.0), ch, cutoff),
          kraus_fallback(build_hv_macrostate(gain, HvSeed::V, big, 1.0), ch, cutoff)};
}

BuresPoint macroqubit_bures(const GainParams& gain, const LossChannel& ch, const MacroqubitOptions& opt) {
  if (gain.g > 1.5) throw UnsupportedInput("macroqubit_bures: g above 1.5 needs matrices beyond desk scale");
  const int cut = opt.cutoff > 0 ? opt.cutoff : default_cutoff(gain);
  auto [rho, sigma] = macroqubit_pair(gain, ch, opt.basis, opt.phi, cut);
  BuresPoint pt;
  pt.x = ch.R * macroqubit_mean_photons(gain);
  pt.truncation_deficit = std::max(rho.trace_deficit, sigma.trace_deficit);
  if (opt.filter) {
    pt.success_probability = ofilter_success_probability(rho, *opt.filter);
    rho = ofilter_project(rho, *opt.filter);
    sigma = ofilter_project(sigma, *opt.filter);
  }
  pt.D = bures_distance(rho, sigma);
  return pt;
}

}  // namespace qiopa
