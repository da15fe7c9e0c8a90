// Canonical typicality of detector marginals after a Haar scramble, compared
// with Monte-Carlo estimates from the uniform-pure-state oracle.

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "qentropy/scenarios.hpp"

using namespace qentropy;

namespace {

// oracle::typical_distance(10, 10, 20000, 20240611u), see freeze_oracles.cpp.
constexpr double kOracleMeanDistance = 0.024914;
constexpr double kOracleStandardError = 0.000024;

double extra(const TraceRow& row, const std::string& name) {
  for (const auto& [k, v] : row.extra)
    if (k == name) return v;
  return NAN;
}

}  // namespace

TEST_CASE("frozen oracle value reproduces") {
  const auto live = oracle::typical_distance(10, 10, 2000, 7u);
  CHECK(std::abs(live.mean - kOracleMeanDistance) <
        3 * std::sqrt(live.standard_error * live.standard_error + kOracleStandardError * kOracleStandardError));
}

TEST_CASE("ten-qubit detectors sit near the maximally mixed state") {
  constexpr std::size_t kSeeds = 100;
  EnergyTransferConfig cfg;
  cfg.n_field_qubits = 10;
  cfg.detector_size = 1;
  cfg.n_detectors = 10;
  double sum = 0, sq = 0;
  for (std::size_t s = 0; s < kSeeds; ++s) {
    cfg.seed = s;
    const ScenarioTrace t = energy_transfer_scenario(cfg);
    double run = 0;
    for (std::size_t k = 0; k < cfg.n_detectors; ++k) run += extra(t.rows[1], "tdist_det" + std::to_string(k));
    run /= static_cast<double>(cfg.n_detectors);
    sum += run;
    sq += run * run;
    CHECK(t.passed());
  }
  const double mean = sum / kSeeds;
  const double se = std::sqrt((sq / kSeeds - mean * mean) / kSeeds);
  MESSAGE("scenario mean " << mean << " +- " << se << ", oracle " << kOracleMeanDistance);
  CHECK(std::abs(mean - kOracleMeanDistance) <
        3 * std::sqrt(se * se + kOracleStandardError * kOracleStandardError));
}
