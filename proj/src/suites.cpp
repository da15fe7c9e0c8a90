#include "qentropy/suites.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "qentropy/channels.hpp"
#include "qentropy/gates.hpp"
#include "qentropy/ledger.hpp"
#include "qentropy/random.hpp"
#include "qentropy/states.hpp"
#include "qentropy/tolerances.hpp"

namespace qentropy {

namespace {

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

double tolerance_of(Suite suite) {
  switch (suite) {
    case Suite::Balance:
    case Suite::DataProcessing:
      return 1e-8;
    default:
      return 1e-9;
  }
}

std::string metric_of(Suite suite) {
  switch (suite) {
    case Suite::Balance: return "|dS_A + dS_C - dS_R - dS_mutual|";
    case Suite::ErasureBound: return "I(A:C) - S(A:C)";
    case Suite::Concavity: return "sum_n p_n S(U_n rho U_n^+) - S(rho')";
    case Suite::Subadditivity: return "S(rho') - S(rho'_1) - S(rho'_2)";
    case Suite::DataProcessing: return "S(N[rho]||N[sigma]) - S(rho||sigma)";
    case Suite::ClassicalContrast: return "max(H(q), H(r)) - H(p)";
  }
  return {};
}

InstanceResult balance_instance(std::size_t index, std::uint64_t s) {
  Rng rng(s);
  const std::size_t da = pick(rng, 2, 4);
  const std::size_t dc = pick(rng, 2, 4);
  const std::size_t dr = pick(rng, 2, 4);
  const PureState purified = purify(random_density(da * dc, dr, derive_seed(s, 1)));
  const std::size_t r = purified.dims().back();
  const PureState initial({da, dc, r}, purified.amplitudes());
  const Partition partition({Block::A, Block::C, Block::R});

  InstanceResult out;
  out.variant = index % kBalanceMapPeriod == kBalanceMapPeriod - 1;
  LedgerRecord rec;
  if (out.variant) {
    rec = entropy_ledger(initial, random_unitary_map(initial.dim(), pick(rng, 2, 4), derive_seed(s, 2)),
                         partition);
  } else {
    rec = entropy_ledger(initial, random_unitary(initial.dim(), derive_seed(s, 2)), partition);
  }
  out.violation = std::abs(rec.residual);
  out.passed = out.violation < tol::balance && rec.purification_gap <= tol::balance;
  return out;
}

InstanceResult erasure_instance(std::size_t index, std::uint64_t s) {
  Rng rng(s);
  const std::size_t dc = index % 2 == 0 ? 2 : 3;
  const std::size_t d = 2 * dc;
  const DensityMatrix rho = random_density(d, pick(rng, 1, d), derive_seed(s, 1));
  const Povm pa = random_povm(2, pick(rng, 2, 4), derive_seed(s, 2));
  const Povm pc = random_povm(dc, pick(rng, 2, 4), derive_seed(s, 3));
  const Partition partition({Block::A, Block::C});
  const BoundRecord b = verify_erasure_bound(DensityMatrix({2, dc}, rho.matrix()), partition, pa, pc);
  InstanceResult out;
  out.violation = -b.slack;
  out.passed = b.slack >= -1e-9;
  return out;
}

InstanceResult concavity_instance(std::uint64_t s) {
  Rng rng(s);
  const std::size_t d = pick(rng, 2, 6);
  const DensityMatrix rho = random_density(d, pick(rng, 1, d), derive_seed(s, 1));
  const RandomUnitaryMap map = random_unitary_map(d, pick(rng, 2, 5), derive_seed(s, 2));
  const Bits before = von_neumann_entropy(rho);
  const Bits after = von_neumann_entropy(apply_random_unitary_map(map, rho));
  Bits average = 0;
  for (const auto& b : map.branches()) {
    average += b.probability * von_neumann_entropy(apply_unitary(b.unitary, rho));
  }
  InstanceResult out;
  out.violation = std::max(average - after, std::abs(average - before));
  out.passed = out.violation <= 1e-9;
  return out;
}

InstanceResult subadditivity_instance(std::uint64_t s) {
  Rng rng(s);
  const std::size_t d1 = pick(rng, 2, 4);
  const std::size_t d2 = pick(rng, 2, 4);
  const DensityMatrix rho1 = random_density(d1, pick(rng, 1, d1), derive_seed(s, 1));
  const DensityMatrix rho2 = random_density(d2, pick(rng, 1, d2), derive_seed(s, 2));
  const DensityMatrix joint =
      apply_unitary(random_unitary(d1 * d2, derive_seed(s, 3)), tensor(rho1, rho2));
  const std::size_t first[] = {0};
  const std::size_t second[] = {1};
  const Bits s_joint = von_neumann_entropy(joint);
  const Bits s_parts =
      von_neumann_entropy(partial_trace(joint, first)) + von_neumann_entropy(partial_trace(joint, second));
  const Bits s_initial = von_neumann_entropy(rho1) + von_neumann_entropy(rho2);
  InstanceResult out;
  out.violation = std::max(s_joint - s_parts, std::abs(s_joint - s_initial));
  out.passed = out.violation <= 1e-9;
  return out;
}

InstanceResult data_processing_instance(std::uint64_t s) {
  Rng rng(s);
  const std::size_t din = pick(rng, 2, 4);
  const std::size_t dout = pick(rng, 2, 4);
  const std::size_t min_ops = (din + dout - 1) / dout;
  const std::size_t n_ops = pick(rng, min_ops, std::max<std::size_t>(min_ops, 4));
  const DensityMatrix rho = random_density(din, pick(rng, 1, din), derive_seed(s, 1));
  const DensityMatrix sigma = random_density(din, din, derive_seed(s, 2));
  const KrausChannel n = random_channel(din, dout, n_ops, derive_seed(s, 3));
  const Bits before = relative_entropy(rho, sigma);
  const Bits after = relative_entropy(apply_channel(n, rho), apply_channel(n, sigma));
  InstanceResult out;
  out.violation = after - before;
  out.passed = !is_infinite(after) && !is_infinite(before) && out.violation <= 1e-8;
  return out;
}

InstanceResult contrast_instance(std::uint64_t s) {
  Rng rng(s);
  const auto rows = static_cast<Eigen::Index>(pick(rng, 2, 5));
  const auto cols = static_cast<Eigen::Index>(pick(rng, 2, 5));
  std::exponential_distribution<double> expo(1.0);
  std::bernoulli_distribution zero(0.2);
  Eigen::MatrixXd p(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) p(i, j) = zero(rng) ? 0.0 : expo(rng);
  }
  if (p.sum() == 0) p(0, 0) = 1.0;
  p /= p.sum();
  const JointDistribution j(p);
  const Eigen::VectorXd q = j.q();
  const Eigen::VectorXd r = j.r();
  const Bits hq = shannon_entropy(std::span<const double>(q.data(), q.size()));
  const Bits hr = shannon_entropy(std::span<const double>(r.data(), r.size()));
  InstanceResult out;
  out.violation = std::max(hq, hr) - joint_entropy(j);
  out.passed = out.violation <= 1e-9;
  return out;
}

}  // namespace

std::string_view suite_name(Suite suite) {
  switch (suite) {
    case Suite::Balance: return "balance";
    case Suite::ErasureBound: return "erasure-bound";
    case Suite::Concavity: return "concavity";
    case Suite::Subadditivity: return "subadditivity";
    case Suite::DataProcessing: return "data-processing";
    case Suite::ClassicalContrast: return "classical-contrast";
  }
  return {};
}

const std::vector<Suite>& all_suites() {
  static const std::vector<Suite> suites = {Suite::Balance,       Suite::ErasureBound,
                                            Suite::Concavity,     Suite::Subadditivity,
                                            Suite::DataProcessing, Suite::ClassicalContrast};
  return suites;
}

std::optional<Suite> parse_suite(std::string_view name) {
  for (auto s : all_suites()) {
    if (suite_name(s) == name) return s;
  }
  return std::nullopt;
}

InstanceResult run_instance(Suite suite, std::size_t index, std::uint64_t seed) {
  const std::uint64_t s = derive_seed(seed, index);
  switch (suite) {
    case Suite::Balance: return balance_instance(index, s);
    case Suite::ErasureBound: return erasure_instance(index, s);
    case Suite::Concavity: return concavity_instance(s);
    case Suite::Subadditivity: return subadditivity_instance(s);
    case Suite::DataProcessing: return data_processing_instance(s);
    case Suite::ClassicalContrast: return contrast_instance(s);
  }
  return {};
}

SuiteReport run_suite(Suite suite, std::size_t instances, std::uint64_t seed, unsigned threads) {
  std::vector<InstanceResult> results(instances);
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(instances, 1))));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < instances; i += threads) results[i] = run_instance(suite, i, seed);
      });
    }
  }

  SuiteReport report;
  report.suite = suite;
  report.metric = metric_of(suite);
  report.tolerance = tolerance_of(suite);
  report.instances = instances;
  report.worst = instances == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < instances; ++i) {
    const auto& r = results[i];
    report.worst = std::max(report.worst, r.violation);
    if (r.variant) ++report.variant_instances;
    if (r.passed) {
      ++report.passed;
    } else {
      report.failures.push_back(i);
    }
  }
  return report;
}

ContrastWitness bell_witness() {
  ComplexVector v = ComplexVector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  const PureState bell({2, 2}, v);
  const std::size_t first[] = {0};
  return {von_neumann_entropy(bell.to_density()), von_neumann_entropy(partial_trace(bell, first))};
}

}  // namespace qentropy
