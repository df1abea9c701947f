#pragma once

#include <Eigen/Dense>
#include <vector>

#include "qiopa/fock.hpp"

namespace qiopa {

/// Beam-splitter loss with reflectivity R and transmittivity T = 1 - R.
struct LossChannel {
  double R = 0.0;
  double T = 1.0;

  /// Throws DomainError unless R is finite and in [0, 1].
  static LossChannel from_reflectivity(double R);
  static LossChannel lossless() { return {0.0, 1.0}; }
};

/// M_p = R^{p/2} T^{n/2} a^p / sqrt(p!) on a truncated single mode, p = 0..p_max.
struct KrausSet {
  std::vector<Eigen::MatrixXd> ops;
  int p_max = 0;

  /// max |(sum_p M_p^T M_p - 1)_{ij}|.
  double completeness_deficit() const;
};

KrausSet kraus_set(const LossChannel& ch, int cutoff, int p_max = -1);

enum class LossTarget { A, B, Both };

/// Kraus map sum_p M_p rho M_p^dag on the chosen mode(s). p_max < 0 uses cutoff - 1.
/// Throws TruncationError when the truncated Kraus set misses more than 1e-9 of the
/// completeness relation.
DensityMatrix apply_loss_kraus(const DensityMatrix& rho, const LossChannel& ch,
                               LossTarget target = LossTarget::Both, int p_max = -1);

/// Independent route: attach a vacuum ancilla per mode, apply the beam splitter
/// |n>|0> -> sum_k sqrt(binom(n,k)) sqrt(T)^k (i sqrt(R))^{n-k} |k>|n-k>, trace the ancillas.
/// The ancilla cutoff equals the system cutoff, which is exact for this map.
DensityMatrix apply_loss_unitary(const FockVector& psi, const LossChannel& ch);
/// out_a, out_b > 0 keep only transmitted photon numbers below them; the kept block is still exact.
DensityMatrix apply_loss_unitary(const TwoModeState& psi, const LossChannel& ch, int out_a = 0, int out_b = 0);

/// P(n_a, n_b) = diagonal of rho; a column vector (dim_b = 1) for a single mode.
Eigen::MatrixXd photon_distribution(const DensityMatrix& rho);

}  // namespace qiopa
