#pragma once

#include <cstddef>

#include "qentropy/states.hpp"

namespace qentropy::gates {

ComplexMatrix pauli_x();
ComplexMatrix pauli_z();
ComplexMatrix hadamard();

/// |a>|b> -> |a>|b + a mod d_target>; equals CNOT for two qubits.
ComplexMatrix controlled_shift(std::size_t d_control, std::size_t d_target);
inline ComplexMatrix cnot() { return controlled_shift(2, 2); }

/// Discrete Fourier transform on dimension d (Hadamard for d = 2).
ComplexMatrix fourier(std::size_t d);

}  // namespace qentropy::gates
