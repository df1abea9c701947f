#include <doctest.h>

#include <cmath>

#include "qiopa/errors.hpp"
#include "qiopa/fock.hpp"

using namespace qiopa;

namespace {

double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  const int r = std::min(a.rows(), b.rows()), c = std::min(a.cols(), b.cols());
  return (a.topLeftCorner(r, c) - b.topLeftCorner(r, c)).cwiseAbs().maxCoeff();
}

// Macrostate from the two-mode squeezer acting in the H/V basis, re-expressed in plus/minus.
TwoModeState macrostate_via_hv(const GainParams& gain, int na, int nb, int cutoff) {
  const TwoModeState seed = fock_state(na, nb, PolarizationBasis::plus_minus(), na + 1, nb + 1);
  const TwoModeState hv = rotate_basis(seed, PolarizationBasis::hv(), na + nb + 1, na + nb + 1);
  const TwoModeState amp = squeeze_two_mode(hv, gain.g, cutoff, cutoff);
  return rotate_basis(amp, PolarizationBasis::plus_minus(), cutoff, cutoff);
}

}  // namespace

TEST_CASE("GainParams identities") {
  for (double g : {0.0, 0.3, 1.0, 2.5, 4.0}) {
    const GainParams p = GainParams::from_gain(g);
    CHECK(p.C * p.C - p.S * p.S == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.Gamma == doctest::Approx(p.S / p.C).epsilon(1e-15));
    CHECK(p.mbar == doctest::Approx(p.S * p.S).epsilon(1e-15));
  }
  CHECK_THROWS_AS(GainParams::from_gain(-0.1), DomainError);
  CHECK_THROWS_AS(GainParams::from_gain(NAN), DomainError);
}

TEST_CASE("collinear macrostate examples") {
  const TwoModeState s0 = build_collinear_macrostate(GainParams::from_gain(0.0), MacroSeed::plus(), 8);
  CHECK(std::abs(s0.amp(1, 0) - 1.0) < 1e-15);
  CHECK(s0.amp.squaredNorm() == doctest::Approx(1.0).epsilon(1e-15));

  const GainParams g = GainParams::from_gain(0.8);
  const TwoModeState s = build_collinear_macrostate(g, MacroSeed::plus());
  CHECK(s.amp(1, 0).real() == doctest::Approx(1.0 / (g.C * g.C)).epsilon(1e-14));
  CHECK(s.amp(1, 0).real() == doctest::Approx(0.559055).epsilon(1e-6));
  CHECK(s.basis.kind == BasisKind::PlusMinus);
  double off = 0.0;
  for (int a = 0; a < s.dim_a(); ++a)
    for (int b = 0; b < s.dim_b(); ++b)
      if (!(a % 2 == 1 && b % 2 == 0)) off += std::norm(s.amp(a, b));
  CHECK(off == 0.0);
  CHECK(s.deficit <= 1e-8);
}

TEST_CASE("macrostates agree with the two-mode squeezer in the H/V basis") {
  const GainParams g = GainParams::from_gain(0.7);
  const int cut = 60;
  const TwoModeState plus = build_collinear_macrostate(g, MacroSeed::plus(), cut, 1.0);
  const TwoModeState minus = build_collinear_macrostate(g, MacroSeed::minus(), cut, 1.0);
  CHECK(max_abs_diff(plus.amp, macrostate_via_hv(g, 1, 0, cut).amp) < 1e-12);
  CHECK(max_abs_diff(minus.amp, macrostate_via_hv(g, 0, 1, cut).amp) < 1e-12);

  // Single-mode squeezers on the plus/minus modes give the same output.
  CHECK(max_abs_diff(plus.amp, amplify_collinear(fock_state(1, 0, PolarizationBasis::plus_minus(), 2, 2), g, cut).amp) <
        1e-12);
  CHECK(max_abs_diff(minus.amp, amplify_collinear(fock_state(0, 1, PolarizationBasis::plus_minus(), 2, 2), g, cut).amp) <
        1e-12);
}

TEST_CASE("plus and minus macrostates are orthogonal") {
  for (double g : {0.2, 0.8, 1.4}) {
    const GainParams p = GainParams::from_gain(g);
    const TwoModeState a = build_collinear_macrostate(p, MacroSeed::plus());
    const TwoModeState b = build_collinear_macrostate(p, MacroSeed::minus(), a.dim_a());
    CHECK(std::abs((a.amp.conjugate().cwiseProduct(b.amp)).sum()) <= 1e-12);
  }
}

TEST_CASE("equatorial mean photons match the closed form") {
  for (double g : {0.5, 1.0}) {
    const GainParams p = GainParams::from_gain(g);
    for (double phi : {0.0, 0.9, M_PI / 2, M_PI}) {
      const TwoModeState s = build_collinear_macrostate(p, MacroSeed::equatorial(phi));
      const auto [np, nm] = mean_photons(s);
      const MeanPhotons ref = mean_photons_and_visibility(p, phi);
      const double tol = 2.0 * std::max(s.deficit, 1e-12) * s.dim_a();
      CHECK(std::abs(np - ref.n_plus) <= tol);
      CHECK(std::abs(nm - ref.n_minus) <= tol);
    }
  }
}

TEST_CASE("truncation escalation and failure") {
  const GainParams g = GainParams::from_gain(1.2);
  CHECK_THROWS_AS(build_collinear_macrostate(g, MacroSeed::plus(), 10), TruncationError);
  try {
    build_collinear_macrostate(g, MacroSeed::plus(), 10);
  } catch (const TruncationError& e) {
    CHECK(e.achieved_deficit > 1e-8);
  }
  const TwoModeState s = build_collinear_macrostate(g, MacroSeed::plus(), 0, 1e-14);
  CHECK(s.deficit <= 1e-14);
  CHECK(s.amp.squaredNorm() >= 1.0 - s.deficit - 1e-15);
}

TEST_CASE("H/V macrostate examples") {
  const TwoModeState s0 = build_hv_macrostate(GainParams::from_gain(0.0), HvSeed::H, 6);
  CHECK(std::abs(s0.amp(1, 0) - 1.0) < 1e-15);
  CHECK(s0.basis.kind == BasisKind::HV);

  const GainParams g = GainParams::from_gain(1.0);
  const TwoModeState s = build_hv_macrostate(g, HvSeed::H);
  double sum = 0.0;
  for (int n = 0; n + 1 < s.dim_a(); ++n) sum += std::pow(g.Gamma, 2 * n) * (n + 1) / std::pow(g.C, 4);
  CHECK(sum == doctest::Approx(1.0).epsilon(s.deficit + 1e-12));
  CHECK(s.amp.squaredNorm() >= 1.0 - s.deficit - 1e-14);
  for (int n = 0; n < 10; ++n)
    CHECK(std::abs(s.amp(n + 2, n + 1) / s.amp(n + 1, n)) ==
          doctest::Approx(g.Gamma * std::sqrt((n + 2.0) / (n + 1.0))).epsilon(1e-13));

  const TwoModeState v = build_hv_macrostate(g, HvSeed::V, s.dim_a());
  CHECK(max_abs_diff(v.amp, s.amp.transpose()) == 0.0);

  // Same state from the squeezer acting on |1H, 0V>.
  const TwoModeState ref = squeeze_two_mode(fock_state(1, 0, PolarizationBasis::hv(), 2, 1), g.g, 50, 50);
  CHECK(max_abs_diff(build_hv_macrostate(g, HvSeed::H, 50, 1.0).amp, ref.amp) < 1e-12);
}

TEST_CASE("CSS builder examples") {
  const FockVector even = build_css_state({4.0, M_PI / 2, +1});
  const FockVector odd = build_css_state({4.0, M_PI / 2, -1});
  double even_odd_mass = 0.0, odd_even_mass = 0.0;
  for (int n = 1; n < even.cutoff(); n += 2) even_odd_mass += std::norm(even.amp(n));
  for (int n = 0; n < odd.cutoff(); n += 2) odd_even_mass += std::norm(odd.amp(n));
  CHECK(even_odd_mass <= 1e-28);
  CHECK(odd_even_mass <= 1e-28);
  CHECK(even.amp.squaredNorm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(odd.amp.squaredNorm() == doctest::Approx(1.0).epsilon(1e-12));

  const FockVector vac = build_css_state({0.0, 1.1, +1}, 10);
  CHECK(std::abs(vac.amp(0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(vac.amp.tail(9).norm() == 0.0);

  CHECK_THROWS_AS(build_css_state({0.0, 0.3, -1}, 10), DomainError);
  // Small alpha, minus sign: the normalization must not lose precision.
  const FockVector tiny = build_css_state({1e-6, 0.4, -1}, 10);
  CHECK(tiny.amp.squaredNorm() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("coherent state builder") {
  const cd b(0.7, -1.2);
  const FockVector v = build_coherent_state(b, 40);
  CHECK(v.amp.squaredNorm() == doctest::Approx(1.0).epsilon(1e-14));
  cd mean_a = 0.0;
  for (int n = 1; n < 40; ++n) mean_a += std::conj(v.amp(n - 1)) * std::sqrt(double(n)) * v.amp(n);
  CHECK(std::abs(mean_a - b) < 1e-12);
}

TEST_CASE("photon-subtracted seed examples") {
  const FockVector p0 = build_photon_subtracted_seed(0, 0.7, 0.0, 5);
  CHECK(std::abs(p0.amp(0) - 1.0) < 1e-15);
  const FockVector p1 = build_photon_subtracted_seed(1, 0.7, 0.3, 5);
  CHECK(std::abs(std::abs(p1.amp(1)) - 1.0) < 1e-15);
  CHECK(std::abs(p1.amp(0)) == 0.0);

  const double s = 0.5;
  const FockVector p2 = build_photon_subtracted_seed(2, s, 0.0, 5);
  const double w2 = 2.0 / std::sqrt(2.0), w0 = -std::sinh(s) * std::cosh(s);
  const double nrm = std::hypot(w2, w0);
  CHECK(p2.amp(2).real() == doctest::Approx(w2 / nrm).epsilon(1e-14));
  CHECK(p2.amp(0).real() == doctest::Approx(w0 / nrm).epsilon(1e-14));
  CHECK(p2.amp.squaredNorm() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("exact photon-subtracted seed reproduces a^p S|0>") {
  for (int p : {1, 2, 3, 4, 5})
    for (double theta : {0.0, 0.8}) {
      const double s = 0.6;
      const int cut = 60;
      const FockVector lhs = photon_subtracted_squeezed_vacuum(p, s, theta, cut);
      const FockVector seed = build_photon_subtracted_seed_exact(p, s, theta, p + 1);
      const FockVector rhs = squeeze_single_mode(seed, s, theta, cut);
      const cd overlap = rhs.amp.dot(lhs.amp);
      CAPTURE(p);
      CHECK(std::abs(overlap) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("photon-subtracted seed differs from the exact seed for p >= 2") {
  const double s = 0.6;
  const FockVector lhs = photon_subtracted_squeezed_vacuum(2, s, 0.0, 60);
  const FockVector rhs = squeeze_single_mode(build_photon_subtracted_seed(2, s, 0.0, 3), s, 0.0, 60);
  CHECK(std::abs(rhs.amp.dot(lhs.amp)) < 0.999);
}

TEST_CASE("mean photons and visibility examples") {
  for (double g : {0.4, 1.3, 2.0}) {
    const GainParams p = GainParams::from_gain(g);
    CHECK(mean_photons_and_visibility(p, M_PI).n_plus == doctest::Approx(p.mbar).epsilon(1e-14));
    CHECK(mean_photons_and_visibility(p, 0.0).n_plus == doctest::Approx(3 * p.mbar + 1).epsilon(1e-14));
  }
  const MeanPhotons big = mean_photons_and_visibility(GainParams::from_gain(8.0), 0.0);
  CHECK(big.n_plus / (GainParams::from_gain(8.0).mbar) == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(std::abs(mean_photons_and_visibility(GainParams::from_gain(12.0), 0.0).visibility - 0.5) < 1e-9);
}

TEST_CASE("partial trace examples") {
  const TwoModeState prod = [] {
    TwoModeState s;
    Eigen::VectorXcd a(3), b(2);
    a << 0.6, cd(0.0, 0.8), 0.0;
    b << std::sqrt(0.5), cd(0.5, 0.5);
    s.amp = a * b.transpose();
    return s;
  }();
  const DensityMatrix rho = DensityMatrix::from_pure(prod);
  const DensityMatrix ra = partial_trace(rho, Mode::A);
  Eigen::VectorXcd a(3);
  a << 0.6, cd(0.0, 0.8), 0.0;
  CHECK((ra.m - a * a.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(ra.trace() == doctest::Approx(rho.trace()).epsilon(1e-12));

  const int d = 4;
  DensityMatrix corr;
  corr.dim_a = corr.dim_b = d;
  corr.m = Eigen::MatrixXcd::Zero(d * d, d * d);
  for (int n = 0; n < d; ++n) corr.m(corr.index(n, n), corr.index(n, n)) = 1.0 / d;
  CHECK((partial_trace(corr, Mode::A).m - Eigen::MatrixXcd::Identity(d, d) / double(d)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((partial_trace(corr, Mode::B).m - Eigen::MatrixXcd::Identity(d, d) / double(d)).cwiseAbs().maxCoeff() < 1e-15);

  const GainParams g = GainParams::from_gain(0.9);
  const TwoModeState h = build_hv_macrostate(g, HvSeed::H, 40, 1.0);
  const DensityMatrix rh = partial_trace(DensityMatrix::from_pure(h), Mode::A);
  CHECK(rh.dim_a == 40);
  for (int n = 0; n + 1 < 40; ++n) {
    CHECK(rh.m(n + 1, n + 1).real() == doctest::Approx(std::pow(g.Gamma, 2 * n) * (n + 1) / std::pow(g.C, 4)).epsilon(1e-12));
    CHECK(std::abs(rh.m(n + 1, n)) < 1e-16);
  }
}

TEST_CASE("basis rotation round trip and photon-number conservation") {
  const GainParams g = GainParams::from_gain(0.6);
  // Keep only total photon numbers below the cutoff so every rotated block is complete.
  TwoModeState s = build_collinear_macrostate(g, MacroSeed::equatorial(0.4), 30, 1.0);
  for (int a = 0; a < 30; ++a)
    for (int b = 0; b < 30; ++b)
      if (a + b >= 30) s.amp(a, b) = 0.0;
  const TwoModeState hv = rotate_basis(s, PolarizationBasis::hv());
  const TwoModeState back = rotate_basis(hv, PolarizationBasis::plus_minus());
  CHECK(max_abs_diff(back.amp, s.amp) < 1e-12);
  const auto [a0, b0] = mean_photons(s);
  const auto [a1, b1] = mean_photons(hv);
  CHECK(a0 + b0 == doctest::Approx(a1 + b1).epsilon(1e-12));
  // |2, 0> in plus/minus: (a_H^dag + a_V^dag)^2 / (2 sqrt2) |0>.
  const TwoModeState two = rotate_basis(fock_state(2, 0, PolarizationBasis::plus_minus(), 3, 3), PolarizationBasis::hv());
  CHECK(std::abs(two.amp(2, 0) - 0.5) < 1e-14);
  CHECK(std::abs(two.amp(1, 1) - std::sqrt(0.5)) < 1e-14);
  CHECK(std::abs(two.amp(0, 2) - 0.5) < 1e-14);
}
