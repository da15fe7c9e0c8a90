#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qentropy/entropy.hpp"

namespace qentropy {

/// One point on a scenario timeline.
struct TraceRow {
  std::string step_label;
  /// S(spin) for the measurement scenario, summed detector entropies for
  /// the energy-transfer scenario.
  Bits s_system = 0;
  Bits s_lab = 0;
  Bits s_global = 0;
  Bits mutual_ac = 0;
  /// Named diagnostics in display order.
  std::vector<std::pair<std::string, double>> extra;
};

/// A pass/fail assertion made by a scenario run: `passed` iff value <= tolerance.
struct ScenarioCheck {
  std::string name;
  double value = 0;
  double tolerance = 0;
  bool passed = false;
};

struct ScenarioTrace {
  std::string scenario;
  /// Column name for TraceRow::s_system ("S_spin" or "S_detectors").
  std::string system_column;
  std::vector<TraceRow> rows;
  std::vector<ScenarioCheck> checks;

  bool passed() const;
};

/// Spin prepared in |->, measured along z by CNOT fanout onto `lab_qubits`
/// lab qubits (notepad, brain cells, gauge ...), then un-measured by applying
/// the same fanout again. Rows: init, measure, invert.
///
/// `seed` is accepted for interface uniformity; the timeline is deterministic.
ScenarioTrace stern_gerlach_scenario(std::size_t lab_qubits, std::uint64_t seed);

struct EnergyTransferConfig {
  std::size_t n_field_qubits = 8;
  std::size_t detector_size = 1;
  std::size_t n_detectors = 4;
  std::uint64_t seed = 0;
  /// Replace the Haar scramble with the identity (control runs).
  bool identity_scramble = false;
};

/// Field register in |0...0>, scrambled by a Haar-random global unitary and
/// recovered by its inverse. Detector k owns qubits
/// [k * detector_size, (k + 1) * detector_size); leftover qubits are the
/// unmonitored field. Rows: field, scramble, recover.
ScenarioTrace energy_transfer_scenario(const EnergyTransferConfig& config);

}  // namespace qentropy
