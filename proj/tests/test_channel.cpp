#include <doctest.h>

#include <cmath>
#include <random>

#include "qiopa/channel.hpp"
#include "qiopa/errors.hpp"

using namespace qiopa;

namespace {

double max_diff(const DensityMatrix& a, const DensityMatrix& b) { return (a.m - b.m).cwiseAbs().maxCoeff(); }

double min_eigen(const DensityMatrix& r) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(r.m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// Test-side Kraus operators written straight from M_p = R^{p/2} T^{n/2} a^p / sqrt(p!).
DensityMatrix kraus_by_definition(const DensityMatrix& rho, double R) {
  const int d = rho.dim_a;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(double(n));
  Eigen::MatrixXd tn = Eigen::MatrixXd::Zero(d, d);
  for (int n = 0; n < d; ++n) tn(n, n) = std::pow(1.0 - R, 0.5 * n);
  DensityMatrix out = rho;
  out.m.setZero();
  Eigen::MatrixXd ap = Eigen::MatrixXd::Identity(d, d);
  double fact = 1.0;
  for (int p = 0; p < d; ++p) {
    if (p > 0) {
      ap = ap * a;
      fact *= p;
    }
    const Eigen::MatrixXd M = std::pow(R, 0.5 * p) * tn * ap / std::sqrt(fact);
    out.m += M * rho.m * M.transpose();
  }
  return out;
}

DensityMatrix random_state(int da, int db, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  const int d = da * db;
  Eigen::MatrixXcd A(d, 3);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < 3; ++j) A(i, j) = cd(n(gen), n(gen)) / (1.0 + i);
  DensityMatrix r;
  r.dim_a = da;
  r.dim_b = db;
  r.m = A * A.adjoint();
  r.m /= r.m.trace().real();
  return r;
}

}  // namespace

TEST_CASE("loss channel construction") {
  const LossChannel c = LossChannel::from_reflectivity(0.3);
  CHECK(c.R == 0.3);
  CHECK(c.T == 1.0 - 0.3);
  CHECK_THROWS_AS(LossChannel::from_reflectivity(-0.01), DomainError);
  CHECK_THROWS_AS(LossChannel::from_reflectivity(1.01), DomainError);
  CHECK_THROWS_AS(LossChannel::from_reflectivity(NAN), DomainError);
}

TEST_CASE("Kraus set completeness") {
  const KrausSet full = kraus_set(LossChannel::from_reflectivity(0.4), 12);
  CHECK(full.completeness_deficit() < 1e-13);
  CHECK(static_cast<int>(full.ops.size()) == full.p_max + 1);
  const KrausSet cut = kraus_set(LossChannel::from_reflectivity(0.4), 12, 2);
  CHECK(cut.completeness_deficit() > 1e-3);
}

TEST_CASE("apply_loss_kraus examples") {
  const DensityMatrix rho = random_state(6, 1, 7);
  CHECK(max_diff(apply_loss_kraus(rho, LossChannel::lossless()), rho) == 0.0);

  const DensityMatrix vac = apply_loss_kraus(rho, LossChannel::from_reflectivity(1.0));
  CHECK(std::abs(vac.m(0, 0) - 1.0) < 1e-14);
  CHECK(vac.m.cwiseAbs().sum() == doctest::Approx(1.0).epsilon(1e-14));

  const DensityMatrix one = DensityMatrix::from_pure(fock_state(1, 3));
  const DensityMatrix out = apply_loss_kraus(one, LossChannel::from_reflectivity(0.3));
  CHECK(out.m(1, 1).real() == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(out.m(0, 0).real() == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(std::abs(out.m(0, 1)) == 0.0);

  CHECK_THROWS_AS(apply_loss_kraus(rho, LossChannel::from_reflectivity(0.5), LossTarget::Both, 1), TruncationError);
}

TEST_CASE("Kraus map matches the operator definition") {
  for (double R : {0.1, 0.5, 0.9}) {
    const DensityMatrix rho = random_state(10, 1, 11);
    CHECK(max_diff(apply_loss_kraus(rho, LossChannel::from_reflectivity(R)), kraus_by_definition(rho, R)) < 1e-14);
  }
}

TEST_CASE("loss targets a single mode") {
  const DensityMatrix rho = random_state(5, 4, 3);
  const LossChannel ch = LossChannel::from_reflectivity(0.35);
  const DensityMatrix ab = apply_loss_kraus(apply_loss_kraus(rho, ch, LossTarget::A), ch, LossTarget::B);
  CHECK(max_diff(ab, apply_loss_kraus(rho, ch, LossTarget::Both)) < 1e-14);
  // Loss on A leaves the B marginal untouched.
  CHECK((partial_trace(apply_loss_kraus(rho, ch, LossTarget::A), Mode::B).m - partial_trace(rho, Mode::B).m)
            .cwiseAbs()
            .maxCoeff() < 1e-14);
}

TEST_CASE("apply_loss_unitary examples") {
  const GainParams g = GainParams::from_gain(0.7);
  const TwoModeState phi = build_collinear_macrostate(g, MacroSeed::equatorial(0.6), 16, 1.0);
  const DensityMatrix pure = apply_loss_unitary(phi, LossChannel::lossless());
  CHECK(max_diff(pure, DensityMatrix::from_pure(phi)) < 1e-14);

  const TwoModeState h = build_hv_macrostate(g, HvSeed::H, 16, 1.0);
  const DensityMatrix gone = apply_loss_unitary(h, LossChannel::from_reflectivity(1.0));
  CHECK(gone(0, 0, 0, 0).real() == doctest::Approx(h.amp.squaredNorm()).epsilon(1e-14));

  const cd alpha(1.1, -0.4);
  const double R = 0.36;
  const DensityMatrix coh = apply_loss_unitary(build_coherent_state(alpha, 40), LossChannel::from_reflectivity(R));
  const DensityMatrix ref = DensityMatrix::from_pure(build_coherent_state(std::sqrt(1 - R) * alpha, 40));
  CHECK(max_diff(coh, ref) < 1e-10);
}

TEST_CASE("Kraus and unitary routes agree") {
  for (double g : {0.5, 1.3}) {
    const GainParams p = GainParams::from_gain(g);
    const TwoModeState eq = build_collinear_macrostate(p, MacroSeed::equatorial(0.9), 18, 1.0);
    const TwoModeState h = build_hv_macrostate(p, HvSeed::H, 18, 1.0);
    for (double R : {0.0, 0.1, 0.5, 0.9}) {
      const LossChannel ch = LossChannel::from_reflectivity(R);
      CHECK(max_diff(apply_loss_kraus(DensityMatrix::from_pure(eq), ch), apply_loss_unitary(eq, ch)) <= 1e-10);
      CHECK(max_diff(apply_loss_kraus(DensityMatrix::from_pure(h), ch), apply_loss_unitary(h, ch)) <= 1e-10);
    }
  }
  const FockVector css = build_css_state({2.0, 1.0, +1}, 30);
  const LossChannel ch = LossChannel::from_reflectivity(0.4);
  CHECK(max_diff(apply_loss_kraus(DensityMatrix::from_pure(css), ch), apply_loss_unitary(css, ch)) <= 1e-10);
}

TEST_CASE("windowed unitary keeps exact elements") {
  const GainParams p = GainParams::from_gain(0.8);
  const TwoModeState eq = build_collinear_macrostate(p, MacroSeed::equatorial(0.3), 24, 1.0);
  const LossChannel ch = LossChannel::from_reflectivity(0.5);
  const DensityMatrix full = apply_loss_unitary(eq, ch);
  const DensityMatrix win = apply_loss_unitary(eq, ch, 10, 10);
  CHECK(win.dim_a == 10);
  double d = 0.0;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j)
      for (int k = 0; k < 10; ++k)
        for (int l = 0; l < 10; ++l) d = std::max(d, std::abs(win(i, j, k, l) - full(i, j, k, l)));
  CHECK(d < 1e-14);
}

TEST_CASE("loss channels compose multiplicatively in T") {
  const DensityMatrix rho = random_state(5, 5, 21);
  for (auto [R1, R2] : {std::pair{0.2, 0.3}, std::pair{0.7, 0.5}, std::pair{0.05, 0.9}}) {
    const DensityMatrix two = apply_loss_kraus(apply_loss_kraus(rho, LossChannel::from_reflectivity(R1)),
                                               LossChannel::from_reflectivity(R2));
    const DensityMatrix one = apply_loss_kraus(rho, LossChannel::from_reflectivity(1 - (1 - R1) * (1 - R2)));
    CHECK(max_diff(two, one) <= 1e-9);
  }
}

TEST_CASE("loss preserves trace, Hermiticity and positivity") {
  for (unsigned s = 0; s < 5; ++s) {
    const DensityMatrix rho = random_state(6, 5, 100 + s);
    for (double R : {0.1, 0.5, 0.9}) {
      const DensityMatrix out = apply_loss_kraus(rho, LossChannel::from_reflectivity(R));
      CHECK(out.trace() == doctest::Approx(rho.trace()).epsilon(1e-9));
      CHECK((out.m - out.m.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
      CHECK(min_eigen(out) >= -1e-9);
    }
  }
}

TEST_CASE("photon distribution examples") {
  TwoModeState s;
  s.amp = Eigen::MatrixXcd::Zero(4, 5);
  s.amp(2, 3) = 1.0;
  const Eigen::MatrixXd p = photon_distribution(DensityMatrix::from_pure(s));
  CHECK(p(2, 3) == 1.0);
  CHECK(p.sum() == 1.0);

  const TwoModeState phi = build_collinear_macrostate(GainParams::from_gain(0.9), MacroSeed::equatorial(0.0), 30, 1.0);
  const Eigen::MatrixXd pe = photon_distribution(DensityMatrix::from_pure(phi));
  double wrong = 0.0;
  for (int a = 0; a < 30; ++a)
    for (int b = 0; b < 30; ++b)
      if (!(a % 2 == 1 && b % 2 == 0)) wrong += pe(a, b);
  CHECK(wrong == 0.0);

  const Eigen::MatrixXd pc = photon_distribution(DensityMatrix::from_pure(build_css_state({4.0, M_PI / 2, +1})));
  CHECK(pc.cols() == 1);
  double odd = 0.0;
  for (int n = 1; n < pc.rows(); n += 2) odd += pc(n, 0);
  CHECK(odd < 1e-28);
  CHECK(pc.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pc.minCoeff() >= -1e-12);
}
