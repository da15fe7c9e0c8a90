#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "qentropy/channels.hpp"
#include "qentropy/entropy.hpp"
#include "qentropy/errors.hpp"
#include "qentropy/tolerances.hpp"

using namespace qentropy;

TEST_CASE("von Neumann entropy") {
  CHECK(von_neumann_entropy(random_pure_state({3, 2}, 1)) == 0);
  CHECK(von_neumann_entropy(random_pure_state({3, 2}, 1).to_density()) < 1e-12);
  CHECK(std::abs(von_neumann_entropy(DensityMatrix::maximally_mixed({2})) - 1.0) < 1e-15);

  const double direct = -(0.5 * std::log2(0.5) + 2 * 0.25 * std::log2(0.25));
  CHECK(direct == doctest::Approx(1.5).epsilon(1e-15));
  ComplexMatrix m = ComplexMatrix::Zero(3, 3);
  m.diagonal() << 0.5, 0.25, 0.25;
  CHECK(std::abs(von_neumann_entropy(DensityMatrix({3}, m)) - direct) < 1e-14);

  SUBCASE("qubit closed form") {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const DensityMatrix rho = random_density(2, 2, s);
      CHECK(std::abs(von_neumann_entropy(rho) - oracle::qubit_entropy(testing::to_oracle(rho.matrix()))) <
            1e-12);
    }
  }

  SUBCASE("range 0 <= S <= log2 D") {
    for (std::uint64_t s = 0; s < 50; ++s) {
      const std::size_t d = 2 + s % 5;
      const Bits e = von_neumann_entropy(random_density(d, 1 + s % d, s));
      CHECK(e >= -tol::ent);
      CHECK(e <= std::log2(static_cast<double>(d)) + tol::ent);
    }
    CHECK(std::abs(von_neumann_entropy(DensityMatrix::maximally_mixed({5})) - std::log2(5.0)) < 1e-14);
  }

  SUBCASE("Shannon entropy") {
    const std::vector<double> p = {0.5, 0.25, 0.25, 0.0};
    CHECK(std::abs(shannon_entropy(p) - 1.5) < 1e-15);
  }
}

TEST_CASE("subsystem entropy") {
  const PureState pair = testing::record_pair();
  const std::size_t first[] = {0};
  CHECK(std::abs(subsystem_entropy(pair, first) - 1.0) < 1e-14);
  CHECK(subsystem_entropy(pair, std::span<const std::size_t>{}) == 0);
  const std::size_t both[] = {0, 1};
  CHECK(subsystem_entropy(pair, both) < 1e-14);
}

TEST_CASE("relative entropy") {
  const DensityMatrix rho = random_density(3, 2, 8);
  CHECK(std::abs(relative_entropy(rho, rho)) < 1e-10);

  const DensityMatrix zero = PureState::basis({2}, 0).to_density();
  const DensityMatrix one = PureState::basis({2}, 1).to_density();
  CHECK(is_infinite(relative_entropy(zero, one)));
  CHECK(!is_infinite(relative_entropy(zero, zero)));

  const Bits closed = oracle::kl({1.0, 0.0}, {0.5, 0.5});
  CHECK(closed == 1.0);
  CHECK(std::abs(relative_entropy(zero, DensityMatrix::maximally_mixed({2})) - closed) < 1e-14);

  SUBCASE("commuting inputs reduce to Kullback-Leibler divergence") {
    std::minstd_rand rng(17);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> p(4), q(4);
      double sp = 0, sq = 0;
      for (int i = 0; i < 4; ++i) {
        sp += (p[i] = u(rng));
        sq += (q[i] = u(rng));
      }
      for (int i = 0; i < 4; ++i) {
        p[i] /= sp;
        q[i] /= sq;
      }
      if (trial % 3 == 0) {
        p[3] = 0;
        const double rest = p[0] + p[1] + p[2];
        for (int i = 0; i < 3; ++i) p[i] /= rest;
      }
      const ComplexMatrix v = random_unitary(4, 500 + static_cast<std::uint64_t>(trial));
      ComplexMatrix dp = ComplexMatrix::Zero(4, 4), dq = ComplexMatrix::Zero(4, 4);
      for (int i = 0; i < 4; ++i) {
        dp(i, i) = p[static_cast<std::size_t>(i)];
        dq(i, i) = q[static_cast<std::size_t>(i)];
      }
      const DensityMatrix a({4}, v * dp * v.adjoint());
      const DensityMatrix b({4}, v * dq * v.adjoint());
      CHECK(std::abs(relative_entropy(a, b) - oracle::kl(p, q)) < 1e-10);
    }
  }

  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(relative_entropy(zero, DensityMatrix::maximally_mixed({3})), DimensionError);
  }
}

TEST_CASE("mutual information") {
  const Partition ac({Block::A, Block::C});
  CHECK(std::abs(mutual_information(tensor(random_density(2, 2, 1), random_density(3, 2, 2)), ac)) < 1e-10);
  CHECK(std::abs(mutual_information(testing::record_pair().to_density(), ac) - 2.0) < 1e-12);

  for (std::uint64_t s = 0; s < 20; ++s) {
    const DensityMatrix rho({2, 2}, random_density(4, 1 + s % 4, 60 + s).matrix());
    const std::size_t first[] = {0};
    const std::size_t second[] = {1};
    const DensityMatrix product = tensor(partial_trace(rho, first), partial_trace(rho, second));
    CHECK(std::abs(mutual_information(rho, ac) - relative_entropy(rho, product)) < 1e-8);
  }

  CHECK_THROWS_AS(mutual_information(random_density(4, 2, 1), Partition({Block::A})), PartitionError);
  CHECK_THROWS_AS(mutual_information(DensityMatrix({2, 2}, random_density(4, 2, 1).matrix()),
                                     Partition({Block::A, Block::R})),
                  PartitionError);
}

TEST_CASE("classical mutual information") {
  Eigen::MatrixXd product(2, 3);
  const Eigen::Vector2d q(0.3, 0.7);
  const Eigen::Vector3d r(0.2, 0.5, 0.3);
  product = q * r.transpose();
  CHECK(std::abs(classical_mutual_information(JointDistribution(product))) < 1e-15);

  Eigen::MatrixXd shared = Eigen::MatrixXd::Zero(2, 2);
  shared(0, 0) = shared(1, 1) = 0.5;
  CHECK(std::abs(classical_mutual_information(JointDistribution(shared)) - 1.0) < 1e-15);

  std::minstd_rand rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd p(3, 4);
    for (Eigen::Index i = 0; i < 3; ++i)
      for (Eigen::Index j = 0; j < 4; ++j) p(i, j) = u(rng);
    p /= p.sum();
    std::vector<double> flat, rows(3, 0.0), cols(4, 0.0);
    for (Eigen::Index i = 0; i < 3; ++i)
      for (Eigen::Index j = 0; j < 4; ++j) {
        flat.push_back(p(i, j));
        rows[static_cast<std::size_t>(i)] += p(i, j);
        cols[static_cast<std::size_t>(j)] += p(i, j);
      }
    const double expected = oracle::shannon(rows) + oracle::shannon(cols) - oracle::shannon(flat);
    CHECK(std::abs(classical_mutual_information(JointDistribution(p)) - expected) < 1e-12);
  }

  Eigen::MatrixXd bad = Eigen::MatrixXd::Constant(2, 2, 0.3);
  CHECK_THROWS_AS(JointDistribution{bad}, ValidationError);
  Eigen::MatrixXd negative = shared;
  negative(0, 1) = -0.1;
  negative(0, 0) = 0.6;
  CHECK_THROWS_AS(JointDistribution{negative}, ValidationError);
}
