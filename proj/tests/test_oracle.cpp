#include <doctest.h>

#include <cmath>
#include <random>

#include "qiopa/errors.hpp"
#include "qiopa/oracle.hpp"
#include "qiopa/wigner.hpp"

using namespace qiopa;

namespace {

constexpr double kPi = 3.14159265358979323846;
const double k2pi = 2.0 / kPi;

DensityMatrix random_state(int d, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXcd A(d, 2);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < 2; ++j) A(i, j) = cd(n(gen), n(gen)) / (1.0 + i);
  DensityMatrix r;
  r.dim_a = d;
  r.dim_b = 1;
  r.m = A * A.adjoint();
  r.m /= r.m.trace().real();
  return r;
}

}  // namespace

TEST_CASE("convention lock on the vacuum") {
  const DensityMatrix vac = DensityMatrix::from_pure(fock_state(0, 40));
  for (double X : {-1.3, -0.4, 0.0, 0.25, 1.1})
    for (double Y : {-0.9, 0.0, 0.6})
      CHECK(std::abs(wigner_numeric_1mode(vac, cd(X, Y)) - k2pi * std::exp(-2 * (X * X + Y * Y))) <= 1e-10);
}

TEST_CASE("single-mode oracle examples") {
  CHECK(wigner_numeric_1mode(DensityMatrix::from_pure(fock_state(0, 10)), 0.0) == doctest::Approx(k2pi).epsilon(1e-15));
  CHECK(wigner_numeric_1mode(DensityMatrix::from_pure(fock_state(1, 10)), 0.0) == doctest::Approx(-k2pi).epsilon(1e-15));
  CHECK_THROWS_AS(wigner_numeric_1mode(DensityMatrix::from_pure(fock_state(0, 0, PolarizationBasis::hv(), 3, 3)), 0.0), UnsupportedInput);

  const GainParams g = GainParams::from_gain(0.8);
  const DensityMatrix rho = single_mode_reference(1, g, LossChannel::lossless(), 140);
  for (double X : {-1.0, 0.0, 0.5})
    for (double Y : {-0.5, 0.0, 1.0})
      CHECK(std::abs(wigner_numeric_1mode(rho, cd(X, Y)) - w_single_mode(1, g, LossChannel::lossless(), X, Y)) <= 1e-8);
}

TEST_CASE("two-mode oracle examples") {
  const DensityMatrix vac = DensityMatrix::from_pure(fock_state(0, 0, PolarizationBasis::hv(), 6, 6));
  CHECK(wigner_numeric_2mode(vac, 0.0, 0.0) == doctest::Approx(k2pi * k2pi).epsilon(1e-15));

  const GainParams g = GainParams::from_gain(1.0);
  const DensityMatrix ideal = collinear_reference(1, 0, g, LossChannel::lossless(), 60);
  CHECK(wigner_numeric_2mode(ideal, 0.0, 0.0) == doctest::Approx(-k2pi * k2pi).epsilon(1e-8));
  const DensityMatrix half = collinear_reference(1, 0, g, LossChannel::from_reflectivity(0.5), 60);
  CHECK(std::abs(wigner_numeric_2mode(half, 0.0, 0.0)) <= 1e-9);
}

TEST_CASE("parity identity at the origin") {
  for (unsigned s = 0; s < 4; ++s) {
    const DensityMatrix rho = random_state(12, s);
    double parity = 0.0;
    for (int n = 0; n < 12; ++n) parity += (n % 2 ? -1.0 : 1.0) * rho.m(n, n).real();
    CHECK(std::abs(wigner_numeric_1mode(rho, 0.0) - k2pi * parity) <= 1e-12);
  }
}

TEST_CASE("oracle is linear in the state") {
  const DensityMatrix a = random_state(15, 31), b = random_state(15, 32);
  DensityMatrix mix = a;
  mix.m = 0.3 * a.m + 0.7 * b.m;
  for (const cd z : {cd(0.0, 0.0), cd(0.4, -0.2), cd(-0.7, 0.9)})
    CHECK(std::abs(wigner_numeric_1mode(mix, z) - 0.3 * wigner_numeric_1mode(a, z) - 0.7 * wigner_numeric_1mode(b, z)) <=
          1e-13);
}

TEST_CASE("displacement matrix is unitary on the low block") {
  const int cut = 80;
  const Eigen::MatrixXcd D = displacement_matrix(cd(0.9, -0.6), cut);
  const Eigen::MatrixXcd DD = D.adjoint() * D;
  const int low = 30;
  CHECK((DD.topLeftCorner(low, low) - Eigen::MatrixXcd::Identity(low, low)).cwiseAbs().maxCoeff() <= 1e-10);
  // <m|D(alpha)|0> is the coherent amplitude.
  const cd alpha(0.9, -0.6);
  CHECK(std::abs(D(0, 0) - std::exp(-0.5 * std::norm(alpha))) <= 1e-15);
  CHECK(std::abs(D(2, 0) - std::exp(-0.5 * std::norm(alpha)) * alpha * alpha / std::sqrt(2.0)) <= 1e-15);
  CHECK_THROWS_AS(displacement_matrix(alpha, 0), DomainError);
  CHECK_THROWS_AS(displacement_matrix(cd(NAN, 0.0), 5), DomainError);
}

TEST_CASE("coherent state Wigner function is a displaced Gaussian") {
  const cd a0(0.8, -0.3);
  const DensityMatrix rho = DensityMatrix::from_pure(build_coherent_state(a0, 50));
  for (const cd z : {cd(0.0, 0.0), cd(0.8, -0.3), cd(1.2, 0.4)})
    CHECK(std::abs(wigner_numeric_1mode(rho, z) - k2pi * std::exp(-2 * std::norm(z - a0))) <= 1e-12);
}

TEST_CASE("leak warning fires when the displaced support exceeds the cutoff") {
  const DensityMatrix vac = DensityMatrix::from_pure(fock_state(0, 12));
  std::vector<std::string> warnings;
  wigner_numeric_1mode(vac, cd(0.5, 0.0), &warnings);
  CHECK(warnings.empty());
  wigner_numeric_1mode(vac, cd(3.0, 1.0), &warnings);
  CHECK(warnings.size() == 1);
}

TEST_CASE("integrate_wigner examples") {
  const std::vector<double> g4 = linear_grid(-4, 4, 0.04);
  REQUIRE(g4.size() == 201);
  const IntegrationResult vac = integrate_wigner(single_mode_field(0, GainParams::from_gain(0.0), LossChannel::lossless(), g4, g4));
  CHECK(vac.value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(vac.warning.empty());

  const std::vector<double> g10 = linear_grid(-10, 10, 0.05);
  const IntegrationResult one =
      integrate_wigner(single_mode_field(1, GainParams::from_gain(1.0), LossChannel::from_reflectivity(0.3), g10, g10));
  CHECK(one.value == doctest::Approx(1.0).epsilon(1e-3));

  const std::vector<double> xs = linear_grid(-3, 3, 0.02), ys = linear_grid(-6, 6, 0.02);
  const IntegrationResult css = integrate_wigner(css_field({4.0, kPi / 2, +1}, LossChannel::lossless(), xs, ys));
  CHECK(css.value == doctest::Approx(1.0).epsilon(1e-3));

  const std::vector<double> coarse = linear_grid(-4, 4, 1.0);
  const IntegrationResult rough = integrate_wigner(css_field({4.0, kPi / 2, +1}, LossChannel::lossless(), coarse, coarse));
  CHECK_FALSE(rough.warning.empty());

  WignerField bad;
  bad.xs = {0.0, 1.0};
  bad.ys = {0.0};
  CHECK_THROWS_AS(integrate_wigner(bad), UnsupportedInput);
}

TEST_CASE("reference builders reject invalid seeds") {
  const GainParams g = GainParams::from_gain(0.5);
  CHECK_THROWS_AS(single_mode_reference(5, g, LossChannel::lossless(), 5), DomainError);
  CHECK_THROWS_AS(collinear_reference(-1, 0, g, LossChannel::lossless(), 10), DomainError);
  CHECK_THROWS_AS(noncollinear_reference(0, -1, g, 0.0, LossChannel::lossless(), 10), DomainError);
}

TEST_CASE("reference states have unit trace and stay positive") {
  const GainParams g = GainParams::from_gain(0.6);
  const DensityMatrix s = single_mode_reference(2, g, LossChannel::from_reflectivity(0.4), 80);
  CHECK(s.trace() == doctest::Approx(1.0).epsilon(1e-10));
  const DensityMatrix c = collinear_reference(1, 1, g, LossChannel::from_reflectivity(0.4), 30);
  CHECK(c.trace() == doctest::Approx(1.0).epsilon(1e-8));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s.m, Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().minCoeff() >= -1e-12);
}
