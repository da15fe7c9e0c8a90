#include "qentropy/channels.hpp"

#include <cmath>
#include <random>
#include <string>

#include "qentropy/errors.hpp"
#include "qentropy/random.hpp"
#include "qentropy/tolerances.hpp"

namespace qentropy {

namespace {

ComplexMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal;
  ComplexMatrix z(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(i, j) = Complex(re, im);
    }
  }
  return z;
}

}  // namespace

// ---------------------------------------------------------------------------
// Types

KrausChannel::KrausChannel(std::vector<ComplexMatrix> operators)
    : operators_(std::move(operators)) {
  if (operators_.empty()) throw ValidationError("channel needs at least one Kraus operator");
  out_dim_ = static_cast<std::size_t>(operators_.front().rows());
  in_dim_ = static_cast<std::size_t>(operators_.front().cols());
  ComplexMatrix completeness = ComplexMatrix::Zero(in_dim_, in_dim_);
  for (const auto& a : operators_) {
    if (static_cast<std::size_t>(a.rows()) != out_dim_ ||
        static_cast<std::size_t>(a.cols()) != in_dim_) {
      throw DimensionError("Kraus operators have inconsistent shapes");
    }
    completeness += a.adjoint() * a;
  }
  if (max_abs_diff(completeness, ComplexMatrix::Identity(in_dim_, in_dim_)) > tol::kraus) {
    throw ValidationError("Kraus operators violate completeness");
  }
}

Povm::Povm(std::vector<ComplexMatrix> elements) : elements_(std::move(elements)) {
  if (elements_.empty()) throw ValidationError("POVM needs at least one element");
  dim_ = static_cast<std::size_t>(elements_.front().rows());
  ComplexMatrix sum = ComplexMatrix::Zero(dim_, dim_);
  for (const auto& e : elements_) {
    if (static_cast<std::size_t>(e.rows()) != dim_ || e.rows() != e.cols()) {
      throw DimensionError("POVM elements have inconsistent shapes");
    }
    if (max_abs_diff(e, e.adjoint()) > tol::herm) {
      throw ValidationError("POVM element is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(e, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -tol::psd) {
      throw ValidationError("POVM element is not positive");
    }
    sum += e;
  }
  if (max_abs_diff(sum, ComplexMatrix::Identity(dim_, dim_)) > tol::kraus) {
    throw ValidationError("POVM elements do not sum to the identity");
  }
}

Povm Povm::computational(std::size_t dim) {
  std::vector<ComplexMatrix> elements;
  for (std::size_t k = 0; k < dim; ++k) {
    ComplexMatrix e = ComplexMatrix::Zero(dim, dim);
    e(k, k) = 1.0;
    elements.push_back(std::move(e));
  }
  return Povm(std::move(elements));
}

RandomUnitaryMap::RandomUnitaryMap(std::vector<Branch> branches) : branches_(std::move(branches)) {
  if (branches_.empty()) throw ValidationError("random-unitary map needs at least one branch");
  const auto d = branches_.front().unitary.rows();
  double total = 0;
  for (const auto& b : branches_) {
    if (b.unitary.rows() != d || b.unitary.cols() != d) {
      throw DimensionError("branch unitaries have inconsistent shapes");
    }
    if (b.probability < -tol::prob) throw ValidationError("negative branch probability");
    if (!is_unitary(b.unitary, tol::unitary)) throw ValidationError("branch is not unitary");
    total += b.probability;
  }
  if (std::abs(total - 1.0) > tol::prob) {
    throw ValidationError("branch probabilities sum to " + std::to_string(total));
  }
}

KrausChannel RandomUnitaryMap::to_kraus() const {
  std::vector<ComplexMatrix> ops;
  ops.reserve(branches_.size());
  for (const auto& b : branches_) ops.push_back(std::sqrt(std::max(b.probability, 0.0)) * b.unitary);
  return KrausChannel(std::move(ops));
}

// ---------------------------------------------------------------------------
// Dynamics

DensityMatrix apply_unitary(const ComplexMatrix& u, const DensityMatrix& rho) {
  if (static_cast<std::size_t>(u.rows()) != rho.dim() || u.rows() != u.cols()) {
    throw DimensionError("unitary does not match state dimension");
  }
  if (!is_unitary(u, tol::unitary)) throw ValidationError("operator is not unitary");
  return {rho.dims(), u * rho.matrix() * u.adjoint()};
}

DensityMatrix apply_channel(const KrausChannel& channel, const DensityMatrix& rho) {
  if (channel.in_dim() != rho.dim()) throw DimensionError("channel does not match state dimension");
  ComplexMatrix out = ComplexMatrix::Zero(channel.out_dim(), channel.out_dim());
  for (const auto& a : channel.operators()) out += a * rho.matrix() * a.adjoint();
  Dims dims = channel.out_dim() == channel.in_dim() ? rho.dims() : Dims{channel.out_dim()};
  return {std::move(dims), std::move(out)};
}

DensityMatrix apply_random_unitary_map(const RandomUnitaryMap& map, const DensityMatrix& rho) {
  if (map.dim() != rho.dim()) throw DimensionError("map does not match state dimension");
  ComplexMatrix out = ComplexMatrix::Zero(rho.dim(), rho.dim());
  for (const auto& b : map.branches()) {
    out += b.probability * (b.unitary * rho.matrix() * b.unitary.adjoint());
  }
  return {rho.dims(), std::move(out)};
}

KrausChannel measure_and_reprepare(const Povm& povm, std::span<const ComplexVector> basis) {
  if (basis.size() != povm.size()) {
    throw DimensionError("reprepare basis has " + std::to_string(basis.size()) +
                         " vectors for " + std::to_string(povm.size()) + " outcomes");
  }
  const auto out_dim = basis.front().size();
  ComplexMatrix stacked(out_dim, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t n = 0; n < basis.size(); ++n) {
    if (basis[n].size() != out_dim) throw DimensionError("reprepare vectors differ in length");
    stacked.col(static_cast<Eigen::Index>(n)) = basis[n];
  }
  const ComplexMatrix gram = stacked.adjoint() * stacked;
  if (max_abs_diff(gram, ComplexMatrix::Identity(gram.rows(), gram.cols())) > tol::norm) {
    throw ValidationError("reprepare basis is not orthonormal");
  }

  std::vector<ComplexMatrix> ops;
  for (std::size_t n = 0; n < povm.size(); ++n) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(povm.elements()[n]);
    for (Eigen::Index m = 0; m < eig.eigenvalues().size(); ++m) {
      const double p = eig.eigenvalues()(m);
      if (p < tol::rank) continue;
      ops.push_back(std::sqrt(p) * basis[n] * eig.eigenvectors().col(m).adjoint());
    }
  }
  return KrausChannel(std::move(ops));
}

JointDistribution joint_local_distribution(const DensityMatrix& rho_ac, const Partition& partition,
                                           const Povm& povm_a, const Povm& povm_c) {
  partition.check_covers(rho_ac.dims());
  if (!partition.indices(Block::R).empty()) {
    throw PartitionError("local measurement statistics take an A/C partition");
  }
  const auto a = partition.indices(Block::A);
  const auto c = partition.indices(Block::C);
  if (a.empty() || c.empty()) throw PartitionError("blocks A and C must both be non-empty");
  if (povm_a.dim() != partition.block_dim(Block::A, rho_ac.dims()) ||
      povm_c.dim() != partition.block_dim(Block::C, rho_ac.dims())) {
    throw DimensionError("POVM dimension does not match its block");
  }

  std::vector<std::size_t> targets = a;
  targets.insert(targets.end(), c.begin(), c.end());
  const ComplexMatrix rho_t = rho_ac.matrix().transpose();

  Eigen::MatrixXd p(povm_a.size(), povm_c.size());
  for (std::size_t i = 0; i < povm_a.size(); ++i) {
    for (std::size_t j = 0; j < povm_c.size(); ++j) {
      const ComplexMatrix effect =
          embed_unitary(kron(povm_a.elements()[i], povm_c.elements()[j]), targets, rho_ac.dims());
      p(i, j) = effect.cwiseProduct(rho_t).sum().real();
    }
  }
  return JointDistribution(std::move(p));
}

// ---------------------------------------------------------------------------
// Generators

Povm random_povm(std::size_t dim, std::size_t outcomes, std::uint64_t seed) {
  if (outcomes < 1) throw ValidationError("POVM needs at least one outcome");
  Rng rng(seed);
  const auto d = static_cast<Eigen::Index>(dim);
  std::vector<ComplexMatrix> g;
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (std::size_t k = 0; k < outcomes; ++k) {
    const ComplexMatrix x = gaussian_matrix(d, d, rng);
    g.push_back(x * x.adjoint());
    sum += g.back();
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(sum);
  const ComplexMatrix inv_sqrt = eig.eigenvectors() *
                                 eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                                 eig.eigenvectors().adjoint();
  for (auto& e : g) {
    e = inv_sqrt * e * inv_sqrt;
    e = (0.5 * (e + e.adjoint())).eval();
  }
  return Povm(std::move(g));
}

KrausChannel random_channel(std::size_t in_dim, std::size_t out_dim, std::size_t n_ops,
                            std::uint64_t seed) {
  const std::size_t big = out_dim * n_ops;
  if (big < in_dim) throw DimensionError("isometry needs out_dim * n_ops >= in_dim");
  const ComplexMatrix u = random_unitary(big, seed);
  const auto in = static_cast<Eigen::Index>(in_dim);
  const auto out = static_cast<Eigen::Index>(out_dim);
  std::vector<ComplexMatrix> ops;
  for (std::size_t k = 0; k < n_ops; ++k) {
    ops.push_back(u.block(static_cast<Eigen::Index>(k) * out, 0, out, in));
  }
  return KrausChannel(std::move(ops));
}

RandomUnitaryMap random_unitary_map(std::size_t dim, std::size_t branches, std::uint64_t seed) {
  Rng rng(seed);
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(branches);
  double total = 0;
  for (auto& x : w) total += (x = expo(rng));
  std::vector<RandomUnitaryMap::Branch> out;
  for (std::size_t n = 0; n < branches; ++n) {
    out.push_back({w[n] / total, random_unitary(dim, derive_seed(seed, n))});
  }
  return RandomUnitaryMap(std::move(out));
}

}  // namespace qentropy
