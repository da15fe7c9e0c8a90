#pragma once

#include "oracles.hpp"
#include "qentropy/states.hpp"

namespace testing {

inline oracle::Mat to_oracle(const qentropy::ComplexMatrix& m) {
  oracle::Mat out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = m(i, j);
  return out;
}

inline double max_diff(const oracle::Mat& a, const qentropy::ComplexMatrix& b) {
  double worst = 0;
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j)
      worst = std::max(worst, std::abs(a(i, j) - b(static_cast<Eigen::Index>(i),
                                                    static_cast<Eigen::Index>(j))));
  return worst;
}

inline std::vector<oracle::cd> to_oracle(const qentropy::ComplexVector& v) {
  return {v.data(), v.data() + v.size()};
}

inline qentropy::ComplexVector ket(std::initializer_list<qentropy::Complex> values) {
  qentropy::ComplexVector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (auto x : values) v(i++) = x;
  return v;
}

/// (|00> + |11>) / sqrt(2): spin and lab record perfectly correlated.
inline qentropy::PureState record_pair() {
  const double h = 1.0 / std::sqrt(2.0);
  return qentropy::PureState({2, 2}, ket({h, 0, 0, h}));
}

}  // namespace testing
