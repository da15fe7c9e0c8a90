#include "qentropy/ledger.hpp"

#include <cmath>
#include <string>

#include "qentropy/errors.hpp"
#include "qentropy/tolerances.hpp"

namespace qentropy {

namespace {

PureState evolve_pure(const ComplexMatrix& u, const PureState& psi) {
  if (static_cast<std::size_t>(u.rows()) != psi.dim() || u.rows() != u.cols()) {
    throw DimensionError("evolution dimension " + std::to_string(u.rows()) +
                         " does not match state dimension " + std::to_string(psi.dim()));
  }
  if (!is_unitary(u, tol::unitary)) throw ValidationError("evolution is not unitary");
  return {psi.dims(), u * psi.amplitudes()};
}

void check_blocks(const PureState& psi, const Partition& partition) {
  partition.check_covers(psi.dims());
  if (partition.indices(Block::A).empty() || partition.indices(Block::C).empty()) {
    throw PartitionError("blocks A and C must both be non-empty");
  }
}

}  // namespace

BlockEntropies block_entropies(const PureState& psi, const Partition& partition) {
  check_blocks(psi, partition);
  const auto a = partition.indices(Block::A);
  const auto c = partition.indices(Block::C);
  const auto r = partition.indices(Block::R);
  std::vector<std::size_t> ac = a;
  ac.insert(ac.end(), c.begin(), c.end());

  BlockEntropies out;
  out.a = subsystem_entropy(psi, a);
  out.c = subsystem_entropy(psi, c);
  out.r = subsystem_entropy(psi, r);
  out.ac = subsystem_entropy(psi, ac);
  return out;
}

LedgerRecord ledger_delta(const BlockEntropies& before, const BlockEntropies& after,
                          std::string label) {
  LedgerRecord rec;
  rec.label = std::move(label);
  rec.dS_A = after.a - before.a;
  rec.dS_C = after.c - before.c;
  rec.dS_R = after.r - before.r;
  rec.dS_mutual = after.mutual() - before.mutual();
  rec.residual = ledger_residual(rec.dS_A, rec.dS_C, rec.dS_R, rec.dS_mutual);
  rec.purification_gap = std::abs(after.ac - after.r);
  return rec;
}

LedgerRecord compose(const LedgerRecord& first, const LedgerRecord& second) {
  LedgerRecord rec;
  rec.label = first.label + "+" + second.label;
  rec.dS_A = first.dS_A + second.dS_A;
  rec.dS_C = first.dS_C + second.dS_C;
  rec.dS_R = first.dS_R + second.dS_R;
  rec.dS_mutual = first.dS_mutual + second.dS_mutual;
  rec.residual = ledger_residual(rec.dS_A, rec.dS_C, rec.dS_R, rec.dS_mutual);
  rec.purification_gap = second.purification_gap;
  return rec;
}

ComplexVector branch_pointer(const RandomUnitaryMap& map) {
  const auto k = static_cast<Eigen::Index>(map.branches().size());
  ComplexVector pointer(k);
  for (Eigen::Index n = 0; n < k; ++n) {
    pointer(n) = std::sqrt(std::max(map.branches()[n].probability, 0.0));
  }
  return pointer / pointer.norm();
}

ComplexMatrix branch_controlled_unitary(const RandomUnitaryMap& map) {
  const auto k = static_cast<Eigen::Index>(map.branches().size());
  const auto d = static_cast<Eigen::Index>(map.dim());
  ComplexMatrix w = ComplexMatrix::Zero(d * k, d * k);
  for (Eigen::Index n = 0; n < k; ++n) {
    const auto& u = map.branches()[n].unitary;
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) w(i * k + n, j * k + n) = u(i, j);
    }
  }
  return w;
}

Dilation dilate(const RandomUnitaryMap& map, const PureState& initial, const Partition& partition) {
  if (map.dim() != initial.dim()) throw DimensionError("map does not match state dimension");
  partition.check_covers(initial.dims());
  PureState state = tensor(initial, PureState({map.branches().size()}, branch_pointer(map)));
  return {std::move(state), partition.extended(Block::R), branch_controlled_unitary(map)};
}

LedgerStep evolve_with_ledger(const PureState& initial, const Evolution& evolution,
                              const Partition& partition, std::string label) {
  const BlockEntropies before = block_entropies(initial, partition);
  if (const auto* u = std::get_if<ComplexMatrix>(&evolution)) {
    PureState after = evolve_pure(*u, initial);
    auto rec = ledger_delta(before, block_entropies(after, partition), std::move(label));
    return {std::move(rec), std::move(after), partition};
  }
  Dilation dil = dilate(std::get<RandomUnitaryMap>(evolution), initial, partition);
  // The pointer starts in a pure product state, so S_0(R) is unchanged by the extension.
  PureState after = evolve_pure(dil.unitary, dil.state);
  auto rec = ledger_delta(before, block_entropies(after, dil.partition), std::move(label));
  return {std::move(rec), std::move(after), std::move(dil.partition)};
}

LedgerRecord entropy_ledger(const PureState& initial, const Evolution& evolution,
                            const Partition& partition) {
  return evolve_with_ledger(initial, evolution, partition).record;
}

LedgerRecord entropy_ledger(const DensityMatrix& initial, const Evolution& evolution,
                            const Partition& partition) {
  if (initial.purity() < 1.0 - tol::trace) {
    throw ValidationError("initial state is not pure (purity " +
                          std::to_string(initial.purity()) + "); purify it first");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(initial.matrix());
  const Eigen::Index top = eig.eigenvalues().size() - 1;
  return entropy_ledger(PureState(initial.dims(), eig.eigenvectors().col(top)), evolution,
                        partition);
}

BoundRecord verify_erasure_bound(const DensityMatrix& rho_ac, const Partition& partition,
                                 const Povm& povm_a, const Povm& povm_c) {
  BoundRecord out;
  out.quantum_mi = mutual_information(rho_ac, partition);
  out.classical_mi =
      classical_mutual_information(joint_local_distribution(rho_ac, partition, povm_a, povm_c));
  out.slack = out.quantum_mi - out.classical_mi;
  return out;
}

std::vector<LedgerRecord> two_stage_ledger(const PureState& initial, const ComplexMatrix& rise,
                                           const ComplexMatrix& fall, const Partition& partition) {
  LedgerStep first = evolve_with_ledger(initial, rise, partition, "t0->t1");
  LedgerStep second = evolve_with_ledger(first.final_state, fall, partition, "t1->t2");
  return {std::move(first.record), std::move(second.record)};
}

}  // namespace qentropy
