#include "qentropy/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "qentropy/errors.hpp"
#include "qentropy/tolerances.hpp"

namespace qentropy {

namespace {

Bits clamp_bits(Bits s) { return s < 0 && s >= -tol::ent ? 0.0 : s; }

}  // namespace

Bits shannon_entropy(std::span<const double> probabilities) {
  double s = 0;
  for (double p : probabilities) {
    if (p > 0) s -= p * std::log2(p);
  }
  return clamp_bits(s);
}

Bits spectrum_entropy(const RealVector& eigenvalues) {
  return shannon_entropy(std::span<const double>(eigenvalues.data(), eigenvalues.size()));
}

Bits von_neumann_entropy(const DensityMatrix& rho) {
  const Bits s = spectrum_entropy(rho.spectrum());
  return std::min(s, std::log2(static_cast<double>(rho.dim())));
}

Bits von_neumann_entropy(const PureState& psi) {
  std::vector<std::size_t> all(psi.num_subsystems());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return subsystem_entropy(psi, all);
}

Bits subsystem_entropy(const PureState& psi, std::span<const std::size_t> subsystems) {
  return spectrum_entropy(reduced_spectrum(psi, subsystems));
}

Bits relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionError("relative entropy of unequal dimensions");

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(sigma.matrix());
  const RealVector& mu = eig.eigenvalues();
  const ComplexMatrix& w = eig.eigenvectors();

  // Tr[rho log2 sigma] = sum_j mu_j>0 <w_j|rho|w_j> log2 mu_j
  double cross = 0;
  for (Eigen::Index j = 0; j < mu.size(); ++j) {
    const double weight = (w.col(j).adjoint() * rho.matrix() * w.col(j))(0, 0).real();
    if (mu(j) > tol::rank) {
      cross += weight * std::log2(mu(j));
    } else if (weight > tol::rank) {
      return kInfiniteBits;
    }
  }
  const double s = -von_neumann_entropy(rho) - cross;
  return clamp_bits(s);
}

Bits mutual_information(const DensityMatrix& rho_ac, const Partition& partition) {
  partition.check_covers(rho_ac.dims());
  const auto a = partition.indices(Block::A);
  const auto c = partition.indices(Block::C);
  if (!partition.indices(Block::R).empty()) {
    throw PartitionError("mutual information takes an A/C partition with no R block");
  }
  if (a.empty() || c.empty()) throw PartitionError("blocks A and C must both be non-empty");
  const Bits s = von_neumann_entropy(partial_trace(rho_ac, a)) +
                 von_neumann_entropy(partial_trace(rho_ac, c)) - von_neumann_entropy(rho_ac);
  return clamp_bits(s);
}

JointDistribution::JointDistribution(Eigen::MatrixXd p) : p_(std::move(p)) {
  if (p_.size() == 0) throw ValidationError("empty joint distribution");
  if (p_.minCoeff() < -tol::prob) throw ValidationError("negative joint probability");
  p_ = p_.cwiseMax(0.0);
  if (std::abs(p_.sum() - 1.0) > tol::prob) {
    throw ValidationError("joint probabilities sum to " + std::to_string(p_.sum()));
  }
}

Bits joint_entropy(const JointDistribution& j) {
  const auto& p = j.probabilities();
  return shannon_entropy(std::span<const double>(p.data(), p.size()));
}

Bits classical_mutual_information(const JointDistribution& j) {
  const auto& p = j.probabilities();
  const Eigen::VectorXd q = j.q();
  const Eigen::VectorXd r = j.r();
  double s = 0;
  for (Eigen::Index a = 0; a < p.rows(); ++a) {
    for (Eigen::Index c = 0; c < p.cols(); ++c) {
      if (p(a, c) > 0) s += p(a, c) * std::log2(p(a, c) / (q(a) * r(c)));
    }
  }
  return clamp_bits(s);
}

}  // namespace qentropy
