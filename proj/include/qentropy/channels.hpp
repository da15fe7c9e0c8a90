#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qentropy/entropy.hpp"
#include "qentropy/states.hpp"

namespace qentropy {

/// CPTP map rho -> sum_k A_k rho A_k^dagger. All operators share one shape
/// (out_dim x in_dim) and satisfy sum_k A_k^dagger A_k = I within tol::kraus.
class KrausChannel {
 public:
  explicit KrausChannel(std::vector<ComplexMatrix> operators);

  std::size_t in_dim() const { return in_dim_; }
  std::size_t out_dim() const { return out_dim_; }
  const std::vector<ComplexMatrix>& operators() const { return operators_; }

 private:
  std::size_t in_dim_;
  std::size_t out_dim_;
  std::vector<ComplexMatrix> operators_;
};

/// Positive operators summing to the identity.
class Povm {
 public:
  explicit Povm(std::vector<ComplexMatrix> elements);

  /// Projective measurement onto the computational basis of dimension `dim`.
  static Povm computational(std::size_t dim);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return elements_.size(); }
  const std::vector<ComplexMatrix>& elements() const { return elements_; }

 private:
  std::size_t dim_;
  std::vector<ComplexMatrix> elements_;
};

/// Coarse-grained evolution rho -> sum_n p_n U_n rho U_n^dagger.
class RandomUnitaryMap {
 public:
  struct Branch {
    double probability;
    ComplexMatrix unitary;
  };

  explicit RandomUnitaryMap(std::vector<Branch> branches);

  std::size_t dim() const { return static_cast<std::size_t>(branches_.front().unitary.rows()); }
  const std::vector<Branch>& branches() const { return branches_; }

  /// Equivalent Kraus form with A_n = sqrt(p_n) U_n.
  KrausChannel to_kraus() const;

 private:
  std::vector<Branch> branches_;
};

DensityMatrix apply_unitary(const ComplexMatrix& u, const DensityMatrix& rho);

/// Output keeps rho's subsystem dims when the channel is dimension-preserving;
/// otherwise the output is a single subsystem of dimension out_dim.
DensityMatrix apply_channel(const KrausChannel& channel, const DensityMatrix& rho);

DensityMatrix apply_random_unitary_map(const RandomUnitaryMap& map, const DensityMatrix& rho);

/// Channel rho -> sum_n Tr[Pi_n rho] |n><n| with Kraus operators
/// A_nm = sqrt(p_m^(n)) |n><v_m^(n)| taken from the spectral decomposition of
/// each element. Eigenvalues below tol::rank are dropped, so a zero element
/// contributes no operators. `basis` must be orthonormal with one vector per
/// POVM element.
KrausChannel measure_and_reprepare(const Povm& povm, std::span<const ComplexVector> basis);

/// p_ij = Tr[(Pi_i^(a) (x) Pi_j^(c)) rho_AC] for an A/C partition.
JointDistribution joint_local_distribution(const DensityMatrix& rho_ac, const Partition& partition,
                                           const Povm& povm_a, const Povm& povm_c);

// Random instance generators.

/// G_k = X_k X_k^dagger for complex Gaussian X_k, then Pi_k = S^{-1/2} G_k S^{-1/2}.
Povm random_povm(std::size_t dim, std::size_t outcomes, std::uint64_t seed);

/// Kraus operators cut from a Haar isometry C^in -> C^out (x) C^n_ops.
KrausChannel random_channel(std::size_t in_dim, std::size_t out_dim, std::size_t n_ops,
                            std::uint64_t seed);

/// Haar branches with Dirichlet(1, ..., 1) weights.
RandomUnitaryMap random_unitary_map(std::size_t dim, std::size_t branches, std::uint64_t seed);

}  // namespace qentropy
