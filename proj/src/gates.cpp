#include "qentropy/gates.hpp"

#include <cmath>
#include <numbers>

namespace qentropy::gates {

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

ComplexMatrix hadamard() {
  ComplexMatrix m(2, 2);
  m << 1, 1, 1, -1;
  return m / std::sqrt(2.0);
}

ComplexMatrix controlled_shift(std::size_t d_control, std::size_t d_target) {
  const auto n = static_cast<Eigen::Index>(d_control * d_target);
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (std::size_t a = 0; a < d_control; ++a) {
    for (std::size_t b = 0; b < d_target; ++b) {
      const auto col = static_cast<Eigen::Index>(a * d_target + b);
      const auto row = static_cast<Eigen::Index>(a * d_target + (b + a) % d_target);
      m(row, col) = 1.0;
    }
  }
  return m;
}

ComplexMatrix fourier(std::size_t d) {
  if (d == 2) return hadamard();
  const auto n = static_cast<Eigen::Index>(d);
  ComplexMatrix m(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const double phase = 2.0 * std::numbers::pi * static_cast<double>(j * k) / static_cast<double>(d);
      m(j, k) = std::polar(scale, phase);
    }
  }
  return m;
}

}  // namespace qentropy::gates
