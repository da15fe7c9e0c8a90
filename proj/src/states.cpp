#include "qentropy/states.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qentropy/errors.hpp"
#include "qentropy/random.hpp"
#include "qentropy/tolerances.hpp"

namespace qentropy {

namespace {

/// full[k * traced_dim + t] is the composite index whose kept digits encode k
/// and whose traced digits encode t.
struct IndexSplit {
  std::size_t kept_dim = 1;
  std::size_t traced_dim = 1;
  std::vector<std::size_t> full;
};

std::vector<std::size_t> sorted_subset(std::span<const std::size_t> subset, std::size_t n) {
  std::vector<std::size_t> out(subset.begin(), subset.end());
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end()) {
    throw DimensionError("subsystem index listed twice");
  }
  if (!out.empty() && out.back() >= n) {
    throw DimensionError("subsystem index " + std::to_string(out.back()) + " out of range for " +
                         std::to_string(n) + " subsystems");
  }
  return out;
}

IndexSplit split_indices(const Dims& dims, const std::vector<std::size_t>& keep) {
  std::vector<bool> kept(dims.size(), false);
  for (auto k : keep) kept[k] = true;

  IndexSplit split;
  for (std::size_t s = 0; s < dims.size(); ++s) {
    (kept[s] ? split.kept_dim : split.traced_dim) *= dims[s];
  }
  const std::size_t total = split.kept_dim * split.traced_dim;
  split.full.resize(total);

  std::vector<std::size_t> digits(dims.size());
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rest = i;
    for (std::size_t s = dims.size(); s-- > 0;) {
      digits[s] = rest % dims[s];
      rest /= dims[s];
    }
    std::size_t k = 0;
    std::size_t t = 0;
    for (std::size_t s = 0; s < dims.size(); ++s) {
      if (kept[s]) {
        k = k * dims[s] + digits[s];
      } else {
        t = t * dims[s] + digits[s];
      }
    }
    split.full[k * split.traced_dim + t] = i;
  }
  return split;
}

Dims select_dims(const Dims& dims, const std::vector<std::size_t>& keep) {
  Dims out;
  out.reserve(keep.size());
  for (auto k : keep) out.push_back(dims[k]);
  return out;
}

/// Amplitudes arranged as a (kept x traced) matrix.
ComplexMatrix schmidt_matrix(const PureState& psi, const std::vector<std::size_t>& keep) {
  const IndexSplit split = split_indices(psi.dims(), keep);
  ComplexMatrix m(split.kept_dim, split.traced_dim);
  for (std::size_t k = 0; k < split.kept_dim; ++k) {
    for (std::size_t t = 0; t < split.traced_dim; ++t) {
      m(k, t) = psi.amplitudes()(split.full[k * split.traced_dim + t]);
    }
  }
  return m;
}

RealVector clamp_and_normalize(RealVector values) {
  for (auto& v : values) v = std::max(v, 0.0);
  const double sum = values.sum();
  if (sum > 0) values /= sum;
  return values;
}

}  // namespace

std::size_t total_dim(std::span<const std::size_t> dims) {
  std::size_t d = 1;
  for (auto k : dims) {
    if (k == 0) throw DimensionError("subsystem dimension must be at least 1");
    if (d > kMaxHilbertDim / k) {
      throw ResourceLimitError("composite dimension exceeds the limit of " +
                               std::to_string(kMaxHilbertDim));
    }
    d *= k;
  }
  return d;
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(Dims dims, ComplexMatrix matrix)
    : dims_(std::move(dims)), matrix_(std::move(matrix)) {
  if (dims_.empty()) throw DimensionError("density matrix needs at least one subsystem");
  const std::size_t d = total_dim(dims_);
  if (matrix_.rows() != matrix_.cols() || static_cast<std::size_t>(matrix_.rows()) != d) {
    throw DimensionError("matrix is " + std::to_string(matrix_.rows()) + "x" +
                         std::to_string(matrix_.cols()) + ", subsystem dims require " +
                         std::to_string(d));
  }
  if (max_abs_diff(matrix_, matrix_.adjoint()) > tol::herm) {
    throw ValidationError("density matrix is not Hermitian");
  }
  matrix_ = (0.5 * (matrix_ + matrix_.adjoint())).eval();
  if (std::abs(matrix_.trace() - Complex(1.0)) > tol::trace) {
    throw ValidationError("density matrix trace " + std::to_string(matrix_.trace().real()) +
                          " differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(matrix_, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -tol::psd) {
    throw ValidationError("density matrix has eigenvalue " +
                          std::to_string(eig.eigenvalues().minCoeff()));
  }
}

DensityMatrix DensityMatrix::maximally_mixed(Dims dims) {
  const std::size_t d = total_dim(dims);
  return {std::move(dims), ComplexMatrix::Identity(d, d) / static_cast<double>(d)};
}

RealVector DensityMatrix::spectrum() const {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(matrix_, Eigen::EigenvaluesOnly);
  return clamp_and_normalize(eig.eigenvalues());
}

double DensityMatrix::purity() const { return matrix_.squaredNorm(); }

// ---------------------------------------------------------------------------
// PureState

PureState::PureState(Dims dims, ComplexVector amplitudes)
    : dims_(std::move(dims)), amplitudes_(std::move(amplitudes)) {
  if (dims_.empty()) throw DimensionError("pure state needs at least one subsystem");
  const std::size_t d = total_dim(dims_);
  if (static_cast<std::size_t>(amplitudes_.size()) != d) {
    throw DimensionError("state has " + std::to_string(amplitudes_.size()) +
                         " amplitudes, subsystem dims require " + std::to_string(d));
  }
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > tol::norm) {
    throw ValidationError("state norm " + std::to_string(norm) + " differs from 1");
  }
  amplitudes_ /= norm;
}

PureState PureState::basis(Dims dims, std::size_t index) {
  const std::size_t d = total_dim(dims);
  if (index >= d) throw DimensionError("basis index out of range");
  ComplexVector v = ComplexVector::Zero(d);
  v(index) = 1.0;
  return {std::move(dims), std::move(v)};
}

DensityMatrix PureState::to_density() const {
  return {dims_, amplitudes_ * amplitudes_.adjoint()};
}

// ---------------------------------------------------------------------------
// Partition

Partition::Partition(std::vector<Block> assignment) : assignment_(std::move(assignment)) {}

std::vector<std::size_t> Partition::indices(Block block) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignment_.size(); ++i) {
    if (assignment_[i] == block) out.push_back(i);
  }
  return out;
}

std::size_t Partition::block_dim(Block block, const Dims& dims) const {
  check_covers(dims);
  std::size_t d = 1;
  for (auto i : indices(block)) d *= dims[i];
  return d;
}

void Partition::check_covers(const Dims& dims) const {
  if (assignment_.size() != dims.size()) {
    throw PartitionError("partition assigns " + std::to_string(assignment_.size()) +
                         " subsystems but the state has " + std::to_string(dims.size()));
  }
}

Partition Partition::extended(Block block) const {
  auto next = assignment_;
  next.push_back(block);
  return Partition(std::move(next));
}

// ---------------------------------------------------------------------------
// Operations

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  total_dim(dims);
  return {std::move(dims), kron(a.matrix(), b.matrix())};
}

PureState tensor(const PureState& a, const PureState& b) {
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  total_dim(dims);
  const Eigen::Index db = b.amplitudes().size();
  ComplexVector out(a.amplitudes().size() * db);
  for (Eigen::Index i = 0; i < a.amplitudes().size(); ++i) {
    out.segment(i * db, db) = a.amplitudes()(i) * b.amplitudes();
  }
  return {std::move(dims), std::move(out)};
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep) {
  if (keep.empty()) throw DimensionError("partial trace needs a non-empty keep set");
  const auto kept = sorted_subset(keep, rho.num_subsystems());
  const IndexSplit split = split_indices(rho.dims(), kept);
  const auto& m = rho.matrix();
  ComplexMatrix out = ComplexMatrix::Zero(split.kept_dim, split.kept_dim);
  for (std::size_t k1 = 0; k1 < split.kept_dim; ++k1) {
    for (std::size_t k2 = 0; k2 < split.kept_dim; ++k2) {
      Complex acc = 0;
      for (std::size_t t = 0; t < split.traced_dim; ++t) {
        acc += m(split.full[k1 * split.traced_dim + t], split.full[k2 * split.traced_dim + t]);
      }
      out(k1, k2) = acc;
    }
  }
  return {select_dims(rho.dims(), kept), std::move(out)};
}

DensityMatrix partial_trace(const PureState& psi, std::span<const std::size_t> keep) {
  if (keep.empty()) throw DimensionError("partial trace needs a non-empty keep set");
  const auto kept = sorted_subset(keep, psi.num_subsystems());
  const ComplexMatrix m = schmidt_matrix(psi, kept);
  return {select_dims(psi.dims(), kept), m * m.adjoint()};
}

RealVector reduced_spectrum(const PureState& psi, std::span<const std::size_t> keep) {
  const auto kept = sorted_subset(keep, psi.num_subsystems());
  const ComplexMatrix m = schmidt_matrix(psi, kept);
  const ComplexMatrix gram = m.rows() <= m.cols() ? ComplexMatrix(m * m.adjoint())
                                                  : ComplexMatrix(m.adjoint() * m);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(gram, Eigen::EigenvaluesOnly);
  return clamp_and_normalize(eig.eigenvalues());
}

PureState purify(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(rho.matrix());
  const RealVector lambda = clamp_and_normalize(eig.eigenvalues());
  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) > tol::rank) support.push_back(i);
  }
  const auto d = static_cast<Eigen::Index>(rho.dim());
  const auto r = static_cast<Eigen::Index>(support.size());
  ComplexVector psi = ComplexVector::Zero(d * r);
  for (Eigen::Index m = 0; m < r; ++m) {
    const double amp = std::sqrt(lambda(support[m]));
    for (Eigen::Index i = 0; i < d; ++i) {
      psi(i * r + m) = amp * eig.eigenvectors()(i, support[m]);
    }
  }
  psi /= psi.norm();
  Dims dims = rho.dims();
  dims.push_back(static_cast<std::size_t>(r));
  return {std::move(dims), std::move(psi)};
}

PureState random_pure_state(Dims dims, std::uint64_t seed) {
  const std::size_t d = total_dim(dims);
  Rng rng(seed);
  std::normal_distribution<double> normal;
  ComplexVector v(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = Complex(re, im);
  }
  v /= v.norm();
  return {std::move(dims), std::move(v)};
}

DensityMatrix random_density(std::size_t dim, std::size_t rank, std::uint64_t seed) {
  if (rank < 1 || rank > dim) {
    throw DimensionError("rank " + std::to_string(rank) + " outside [1, " + std::to_string(dim) +
                         "]");
  }
  const std::size_t keep[] = {0};
  return partial_trace(random_pure_state({dim, rank}, seed), keep);
}

ComplexMatrix random_unitary(std::size_t dim, std::uint64_t seed) {
  if (dim < 1) throw DimensionError("unitary dimension must be at least 1");
  total_dim(std::span<const std::size_t>(&dim, 1));
  Rng rng(seed);
  std::normal_distribution<double> normal;
  const auto n = static_cast<Eigen::Index>(dim);
  ComplexMatrix z(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(i, j) = Complex(re, im);
    }
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const auto& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

namespace {

struct LocalLayout {
  std::size_t target_dim = 1;
  std::vector<std::size_t> stride;
  /// offset[s] places the digits of the target-local index s into the composite index.
  std::vector<std::size_t> offset;
};

LocalLayout local_layout(const ComplexMatrix& op, std::span<const std::size_t> targets,
                         const Dims& dims) {
  if (targets.empty()) throw DimensionError("local operator needs at least one target");
  sorted_subset(targets, dims.size());

  LocalLayout layout;
  for (auto t : targets) layout.target_dim *= dims[t];
  if (op.rows() != op.cols() || static_cast<std::size_t>(op.rows()) != layout.target_dim) {
    throw DimensionError("operator is " + std::to_string(op.rows()) + "x" +
                         std::to_string(op.cols()) + ", targets span dimension " +
                         std::to_string(layout.target_dim));
  }
  layout.stride.assign(dims.size(), 1);
  for (std::size_t s = dims.size(); s-- > 1;) layout.stride[s - 1] = layout.stride[s] * dims[s];
  layout.offset.assign(layout.target_dim, 0);
  for (std::size_t s = 0; s < layout.target_dim; ++s) {
    std::size_t rest = s;
    for (std::size_t k = targets.size(); k-- > 0;) {
      layout.offset[s] += (rest % dims[targets[k]]) * layout.stride[targets[k]];
      rest /= dims[targets[k]];
    }
  }
  return layout;
}

/// Splits composite index j into (target-local index, index with target digits zeroed).
std::pair<std::size_t, std::size_t> split_local(std::size_t j, std::span<const std::size_t> targets,
                                                const Dims& dims, const LocalLayout& layout) {
  std::size_t local = 0;
  std::size_t base = j;
  for (auto t : targets) {
    const std::size_t digit = (j / layout.stride[t]) % dims[t];
    local = local * dims[t] + digit;
    base -= digit * layout.stride[t];
  }
  return {local, base};
}

}  // namespace

ComplexMatrix embed_unitary(const ComplexMatrix& op, std::span<const std::size_t> targets,
                            const Dims& dims) {
  const std::size_t d = total_dim(dims);
  const LocalLayout layout = local_layout(op, targets, dims);
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    const auto [local, base] = split_local(j, targets, dims, layout);
    for (std::size_t s = 0; s < layout.target_dim; ++s) {
      const Complex v = op(s, local);
      if (v != Complex(0)) out(base + layout.offset[s], j) = v;
    }
  }
  return out;
}

PureState apply_local(const ComplexMatrix& op, std::span<const std::size_t> targets,
                      const PureState& psi) {
  const LocalLayout layout = local_layout(op, targets, psi.dims());
  const auto& in = psi.amplitudes();
  ComplexVector out(in.size());
  ComplexVector gathered(layout.target_dim);
  for (std::size_t j = 0; j < psi.dim(); ++j) {
    const auto [local, base] = split_local(j, targets, psi.dims(), layout);
    if (local != 0) continue;
    for (std::size_t s = 0; s < layout.target_dim; ++s) gathered(s) = in(base + layout.offset[s]);
    const ComplexVector mapped = op * gathered;
    for (std::size_t s = 0; s < layout.target_dim; ++s) out(base + layout.offset[s]) = mapped(s);
  }
  return {psi.dims(), std::move(out)};
}

bool is_unitary(const ComplexMatrix& u, double tolerance) {
  if (u.rows() != u.cols()) return false;
  return max_abs_diff(u.adjoint() * u, ComplexMatrix::Identity(u.rows(), u.cols())) <= tolerance;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("shape mismatch in comparison");
  }
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace qentropy
