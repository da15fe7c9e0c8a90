#pragma once

#include <string>
#include <variant>
#include <vector>

#include "qentropy/channels.hpp"
#include "qentropy/entropy.hpp"
#include "qentropy/states.hpp"

namespace qentropy {

/// Entropy changes of one evolution step on a purified A/C/R system.
/// residual = dS_A + dS_C - dS_R - dS_mutual, which vanishes whenever the
/// global state stays pure.
struct LedgerRecord {
  std::string label;
  Bits dS_A = 0;
  Bits dS_C = 0;
  Bits dS_R = 0;
  Bits dS_mutual = 0;
  Bits residual = 0;
  /// |S_t(AC) - S_t(R)| at the end of the step.
  Bits purification_gap = 0;
};

inline Bits ledger_residual(Bits dS_A, Bits dS_C, Bits dS_R, Bits dS_mutual) {
  return dS_A + dS_C - dS_R - dS_mutual;
}

struct BlockEntropies {
  Bits a = 0;
  Bits c = 0;
  Bits r = 0;
  Bits ac = 0;

  Bits mutual() const { return a + c - ac; }
};

/// Entropies of blocks A, C, R and of AC, each from its own reduction.
BlockEntropies block_entropies(const PureState& psi, const Partition& partition);

LedgerRecord ledger_delta(const BlockEntropies& before, const BlockEntropies& after,
                          std::string label);

/// Sum of two consecutive steps (t0 -> t1 -> t2 gives t0 -> t2).
LedgerRecord compose(const LedgerRecord& first, const LedgerRecord& second);

struct BoundRecord {
  Bits quantum_mi = 0;
  Bits classical_mi = 0;
  Bits slack = 0;
};

using Evolution = std::variant<ComplexMatrix, RandomUnitaryMap>;

/// Unitary dilation of a random-unitary map: a branch-pointer ancilla of
/// dimension = branch count is appended to R in the state sum_n sqrt(p_n)|n>,
/// and the map becomes the controlled unitary sum_n U_n (x) |n><n|.
struct Dilation {
  PureState state;
  Partition partition;
  ComplexMatrix unitary;
};

/// Pointer state sum_n sqrt(p_n)|n> of a map's dilation.
ComplexVector branch_pointer(const RandomUnitaryMap& map);

/// sum_n U_n (x) |n><n| with the pointer as the last (least significant) factor.
ComplexMatrix branch_controlled_unitary(const RandomUnitaryMap& map);

Dilation dilate(const RandomUnitaryMap& map, const PureState& initial, const Partition& partition);

struct LedgerStep {
  LedgerRecord record;
  PureState final_state;
  Partition final_partition;
};

/// Runs one evolution and returns the record with the evolved (possibly
/// dilated) global state.
LedgerStep evolve_with_ledger(const PureState& initial, const Evolution& evolution,
                              const Partition& partition, std::string label = "t0->t1");

LedgerRecord entropy_ledger(const PureState& initial, const Evolution& evolution,
                            const Partition& partition);

/// Accepts a density matrix that must be pure (purity >= 1 - tol::trace);
/// throws ValidationError otherwise. Purify mixed states first.
LedgerRecord entropy_ledger(const DensityMatrix& initial, const Evolution& evolution,
                            const Partition& partition);

/// S(A:C) against the mutual information of local POVM outcomes.
BoundRecord verify_erasure_bound(const DensityMatrix& rho_ac, const Partition& partition,
                                 const Povm& povm_a, const Povm& povm_c);

/// Records for t0 -> t1 (rise) and t1 -> t2 (fall).
std::vector<LedgerRecord> two_stage_ledger(const PureState& initial, const ComplexMatrix& rise,
                                           const ComplexMatrix& fall, const Partition& partition);

}  // namespace qentropy
