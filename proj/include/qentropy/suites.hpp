#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qentropy/entropy.hpp"

namespace qentropy {

/// Randomized verification suites, one per entropy identity or inequality.
enum class Suite { Balance, ErasureBound, Concavity, Subadditivity, DataProcessing, ClassicalContrast };

std::string_view suite_name(Suite suite);
std::optional<Suite> parse_suite(std::string_view name);
const std::vector<Suite>& all_suites();

/// `violation` is the suite's metric, oriented so that the instance passes
/// iff violation <= the suite tolerance (strictly below for balance).
struct InstanceResult {
  double violation = 0;
  bool passed = false;
  /// Balance: the instance used a dilated random-unitary map.
  bool variant = false;
};

struct SuiteReport {
  Suite suite = Suite::Balance;
  std::string metric;
  double tolerance = 0;
  std::size_t instances = 0;
  std::size_t passed = 0;
  std::size_t variant_instances = 0;
  double worst = 0;
  std::vector<std::size_t> failures;

  bool all_passed() const { return passed == instances; }
};

/// Instance `index` draws everything from derive_seed(seed, index), so results
/// do not depend on thread count or evaluation order.
InstanceResult run_instance(Suite suite, std::size_t index, std::uint64_t seed);

SuiteReport run_suite(Suite suite, std::size_t instances, std::uint64_t seed, unsigned threads = 1);

/// Every balance instance with index % kBalanceMapPeriod == kBalanceMapPeriod - 1
/// evolves under a random-unitary map instead of a global unitary.
inline constexpr std::size_t kBalanceMapPeriod = 6;

/// Bell projector: joint entropy and single-qubit entropy.
struct ContrastWitness {
  Bits joint = 0;
  Bits subsystem = 0;
};
ContrastWitness bell_witness();

}  // namespace qentropy
