#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "qiopa/channel.hpp"
#include "qiopa/fock.hpp"

namespace qiopa {

/// Uhlmann-Jozsa fidelity Tr^2 sqrt(sqrt(rho) sigma sqrt(rho)), clipped to [0, 1].
/// Both matrices are split into the connected blocks of their joint sparsity pattern first.
/// Eigenvalues in (-1e-6, -1e-10) are clamped to zero; anything lower throws InvalidState.
/// Eigenvalues within dim * eps of the largest are treated as zero.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

/// sqrt(1 - sqrt(F)).
double bures_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Hermitian square root with the same clamping rule as fidelity().
Eigen::MatrixXcd hermitian_sqrt(const Eigen::MatrixXcd& m);

struct CssBures {
  double components;      ///< sqrt(1 - e^{-2 T alpha^2 sin^2 phi})
  double superpositions;  ///< sqrt(1 - sqrt(1 - e^{-4 R alpha^2 sin^2 phi}))
  std::string warning;    ///< set when T alpha^2 sin^2 phi <= 1
};

CssBures css_bures_analytic(double alpha, double phi, const LossChannel& ch);

struct OFilterConfig {
  int k = 0;
};

/// Diagonal POVM on a (cutoff x cutoff) two-mode space, indexed like DensityMatrix.
/// plus accepts n_a - n_b > k, minus accepts n_b - n_a > k, inconclusive holds the rest.
struct OFilterPovm {
  Eigen::VectorXd plus;
  Eigen::VectorXd minus;
  Eigen::VectorXd inconclusive;
};

OFilterPovm ofilter_povm(const OFilterConfig& cfg, int cutoff);
OFilterPovm ofilter_povm(const OFilterConfig& cfg, int dim_a, int dim_b);

/// Tr[rho (F+ + F-)].
double ofilter_success_probability(const DensityMatrix& rho, const OFilterConfig& cfg);

/// P rho P / Tr[P rho] with P the conclusive projector. Throws DegenerateFilter on zero trace.
DensityMatrix ofilter_project(const DensityMatrix& rho, const OFilterConfig& cfg);

enum class MacroBasis { Equatorial, HV };

struct MacroqubitOptions {
  MacroBasis basis = MacroBasis::Equatorial;
  std::optional<OFilterConfig> filter;
  double phi = 0.0;  ///< equatorial angle; the distance does not depend on it
  int cutoff = 0;    ///< 0 picks default_cutoff(gain)
};

struct BuresPoint {
  double x = 0.0;  ///< R (4 mbar + 1)
  double D = 0.0;
  double success_probability = 1.0;  ///< of the first state when filtered
  double truncation_deficit = 0.0;
};

/// Distance between the two orthogonal lossy macrostates. Throws UnsupportedInput for g > 1.5.
BuresPoint macroqubit_bures(const GainParams& gain, const LossChannel& ch, const MacroqubitOptions& opt = {});

/// Lossy density pair used by macroqubit_bures; analytic assembly with a Kraus fallback.
std::pair<DensityMatrix, DensityMatrix> macroqubit_pair(const GainParams& gain, const LossChannel& ch,
                                                        MacroBasis basis, double phi, int cutoff);

/// Mean photon number of the orthogonal macrostates, 4 mbar + 1.
double macroqubit_mean_photons(const GainParams& gain);

struct BuresCurve {
  std::string family;
  double g_or_alpha = 0.0;
  double phi = 0.0;
  std::vector<double> x;
  std::vector<double> D;
};

}  // namespace qiopa
