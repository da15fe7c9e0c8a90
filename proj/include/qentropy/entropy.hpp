#pragma once

#include <limits>
#include <span>

#include "qentropy/states.hpp"

namespace qentropy {

/// Entropies and information quantities, always in bits (log base 2).
using Bits = double;

/// Returned by relative_entropy when the support condition fails.
inline constexpr Bits kInfiniteBits = std::numeric_limits<double>::infinity();

inline bool is_infinite(Bits b) { return b == kInfiniteBits; }

/// -sum p log2 p over a probability vector, with 0 log 0 = 0.
Bits shannon_entropy(std::span<const double> probabilities);
Bits spectrum_entropy(const RealVector& eigenvalues);

Bits von_neumann_entropy(const DensityMatrix& rho);
Bits von_neumann_entropy(const PureState& psi);

/// Entropy of the reduction of `psi` onto `subsystems` (empty set gives 0).
Bits subsystem_entropy(const PureState& psi, std::span<const std::size_t> subsystems);

/// Tr[rho log2 rho - rho log2 sigma], or kInfiniteBits when rho has weight
/// outside the support of sigma (support decided at tol::rank).
Bits relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

/// S(A) + S(C) - S(AC). The partition must use only blocks A and C.
Bits mutual_information(const DensityMatrix& rho_ac, const Partition& partition);

/// Two-index probability table with its marginals. Entries in
/// [-tol::prob, 0) are clamped to zero.
class JointDistribution {
 public:
  explicit JointDistribution(Eigen::MatrixXd p);

  const Eigen::MatrixXd& probabilities() const { return p_; }
  /// Row marginal q_i.
  Eigen::VectorXd q() const { return p_.rowwise().sum(); }
  /// Column marginal r_j.
  Eigen::VectorXd r() const { return p_.colwise().sum().transpose(); }

 private:
  Eigen::MatrixXd p_;
};

Bits joint_entropy(const JointDistribution& j);
Bits classical_mutual_information(const JointDistribution& j);

}  // namespace qentropy
