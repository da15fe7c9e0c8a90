#pragma once

#include <cstddef>

namespace qentropy::tol {

inline constexpr double herm = 1e-10;
inline constexpr double trace = 1e-10;
inline constexpr double psd = 1e-9;
inline constexpr double unitary = 1e-10;
inline constexpr double recon = 1e-9;
inline constexpr double rank = 1e-12;  // eigenvalue cutoff for rank and support
inline constexpr double norm = 1e-10;
inline constexpr double ent = 1e-9;
inline constexpr double prob = 1e-10;
inline constexpr double kraus = 1e-8;
inline constexpr double balance = 1e-8;

}  // namespace qentropy::tol

namespace qentropy {

/// Largest composite Hilbert-space dimension any operation will build (12 qubits).
inline constexpr std::size_t kMaxHilbertDim = 4096;

}  // namespace qentropy
