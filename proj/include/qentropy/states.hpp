#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qentropy {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Subsystem dimensions. Index 0 is the leftmost (most significant) tensor
/// factor, so composite basis indices enumerate factors left to right.
using Dims = std::vector<std::size_t>;

/// Product of `dims`; throws ResourceLimitError past kMaxHilbertDim.
std::size_t total_dim(std::span<const std::size_t> dims);

/// Mixed state on a multipartite space. Validated on construction: Hermitian,
/// positive semidefinite and unit trace within the library tolerances. The
/// stored matrix is symmetrized as (rho + rho^dagger) / 2.
class DensityMatrix {
 public:
  DensityMatrix(Dims dims, ComplexMatrix matrix);

  static DensityMatrix maximally_mixed(Dims dims);

  const Dims& dims() const { return dims_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  std::size_t num_subsystems() const { return dims_.size(); }
  const ComplexMatrix& matrix() const { return matrix_; }

  /// Eigenvalues in ascending order with values in [-tol_psd, 0) clamped to
  /// zero and the whole spectrum renormalized to sum to one.
  RealVector spectrum() const;

  double purity() const;

 private:
  Dims dims_;
  ComplexMatrix matrix_;
};

class PureState {
 public:
  /// Amplitudes must have unit norm within tol::norm; they are renormalized exactly.
  PureState(Dims dims, ComplexVector amplitudes);

  static PureState basis(Dims dims, std::size_t index);

  const Dims& dims() const { return dims_; }
  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
  std::size_t num_subsystems() const { return dims_.size(); }
  const ComplexVector& amplitudes() const { return amplitudes_; }

  DensityMatrix to_density() const;

 private:
  Dims dims_;
  ComplexVector amplitudes_;
};

enum class Block { A, C, R };

/// Assigns every subsystem index to one of the blocks A, C, R. Block R may be
/// empty, in which case it behaves as a one-dimensional factor.
class Partition {
 public:
  explicit Partition(std::vector<Block> assignment);

  std::size_t size() const { return assignment_.size(); }
  Block block_of(std::size_t subsystem) const { return assignment_.at(subsystem); }
  const std::vector<Block>& assignment() const { return assignment_; }

  /// Subsystem indices of `block`, ascending.
  std::vector<std::size_t> indices(Block block) const;
  std::size_t block_dim(Block block, const Dims& dims) const;

  /// Throws PartitionError unless this partition has one entry per subsystem.
  void check_covers(const Dims& dims) const;

  /// Same partition with an extra subsystem appended to `block`.
  Partition extended(Block block) const;

 private:
  std::vector<Block> assignment_;
};

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);
PureState tensor(const PureState& a, const PureState& b);

/// Reduced state on `keep` (any order, no duplicates); the kept subsystems
/// appear in their original relative order.
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep);
DensityMatrix partial_trace(const PureState& psi, std::span<const std::size_t> keep);

/// Spectrum of the smaller of the two Schmidt Gram matrices of `psi` split at
/// `keep`; it agrees with the reduced state's spectrum up to zeros. `keep` may
/// be empty (spectrum {1}) or the full set.
RealVector reduced_spectrum(const PureState& psi, std::span<const std::size_t> keep);

/// Purification on dims rho.dims() ++ [r], r = rank of rho at cutoff tol::rank.
PureState purify(const DensityMatrix& rho);

/// Haar-random pure state (normalized complex Gaussian vector).
PureState random_pure_state(Dims dims, std::uint64_t seed);

/// Reduction of a Haar-random pure state on dim x rank; deterministic per seed.
DensityMatrix random_density(std::size_t dim, std::size_t rank, std::uint64_t seed);

/// Haar unitary: QR of a complex Ginibre matrix with the phases of R's
/// diagonal folded back into Q.
ComplexMatrix random_unitary(std::size_t dim, std::uint64_t seed);

/// Lifts `op` (acting on `targets`, in the order given) to the full space
/// described by `dims`, acting as identity on all other subsystems.
/// Works for any square operator, not only unitaries.
ComplexMatrix embed_unitary(const ComplexMatrix& op, std::span<const std::size_t> targets,
                            const Dims& dims);

/// Applies `op` on `targets` directly to the amplitudes, without forming
/// the full-space matrix. `op` must be unitary for the result to stay normalized.
PureState apply_local(const ComplexMatrix& op, std::span<const std::size_t> targets,
                      const PureState& psi);

/// Kronecker product, `a`'s index most significant.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

bool is_unitary(const ComplexMatrix& u, double tolerance = 1e-10);

/// Largest entry-wise absolute difference.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace qentropy
