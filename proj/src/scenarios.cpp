#include "qentropy/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qentropy/errors.hpp"
#include "qentropy/gates.hpp"
#include "qentropy/ledger.hpp"
#include "qentropy/states.hpp"
#include "qentropy/tolerances.hpp"

namespace qentropy {

namespace {

std::vector<std::size_t> range(std::size_t first, std::size_t last) {
  std::vector<std::size_t> out(last - first);
  std::iota(out.begin(), out.end(), first);
  return out;
}

ScenarioCheck check(std::string name, double value, double tolerance) {
  return {std::move(name), value, tolerance, value <= tolerance};
}

double trace_distance_to_maximally_mixed(const DensityMatrix& rho) {
  const RealVector lambda = rho.spectrum();
  const double flat = 1.0 / static_cast<double>(rho.dim());
  return 0.5 * (lambda.array() - flat).abs().sum();
}

}  // namespace

bool ScenarioTrace::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

// ---------------------------------------------------------------------------

ScenarioTrace stern_gerlach_scenario(std::size_t lab_qubits, std::uint64_t /*seed*/) {
  if (lab_qubits < 1) throw DimensionError("stern-gerlach needs at least one lab qubit");
  Dims dims(lab_qubits + 1, 2);
  total_dim(dims);

  const std::vector<std::size_t> spin = {0};
  const std::vector<std::size_t> lab = range(1, lab_qubits + 1);
  const std::vector<std::size_t> all = range(0, lab_qubits + 1);

  std::vector<Block> assignment(lab_qubits + 1, Block::A);
  assignment[0] = Block::C;
  const Partition partition(std::move(assignment));

  ComplexVector right(2);
  right << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const PureState spin_right({2}, right);
  PureState psi = spin_right;
  for (std::size_t k = 0; k < lab_qubits; ++k) psi = tensor(psi, PureState::basis({2}, 0));

  const std::size_t d = psi.dim();
  ComplexMatrix fanout = ComplexMatrix::Identity(d, d);
  for (auto q : lab) {
    const std::size_t targets[] = {0, q};
    fanout = embed_unitary(gates::cnot(), targets, dims) * fanout;
  }

  ScenarioTrace trace;
  trace.scenario = "stern-gerlach";
  trace.system_column = "S_spin";

  const ComplexMatrix right_projector = spin_right.to_density().matrix();
  std::vector<PureState> states = {psi};
  states.emplace_back(dims, fanout * states[0].amplitudes());
  states.emplace_back(dims, fanout * states[1].amplitudes());
  const char* labels[] = {"init", "measure", "invert"};

  BlockEntropies previous = block_entropies(states[0], partition);
  double max_residual = 0;
  for (std::size_t t = 0; t < states.size(); ++t) {
    const PureState& s = states[t];
    const BlockEntropies blocks = block_entropies(s, partition);
    const LedgerRecord rec = ledger_delta(previous, blocks, labels[t]);
    max_residual = std::max(max_residual, std::abs(rec.residual));
    previous = blocks;

    TraceRow row;
    row.step_label = labels[t];
    row.s_system = blocks.c;
    row.s_lab = blocks.a;
    row.s_global = subsystem_entropy(s, all);
    row.mutual_ac = blocks.mutual();
    for (std::size_t k = 0; k < lab.size(); ++k) {
      const std::size_t pair[] = {0, lab[k]};
      const Bits mi = subsystem_entropy(s, spin) + subsystem_entropy(s, std::span(&lab[k], 1)) -
                      subsystem_entropy(s, pair);
      row.extra.emplace_back("I_spin_lab" + std::to_string(k), mi);
    }
    row.extra.emplace_back("spin_deviation",
                           max_abs_diff(partial_trace(s, spin).matrix(), right_projector));
    row.extra.emplace_back("residual", rec.residual);
    trace.rows.push_back(std::move(row));
  }

  const auto& r = trace.rows;
  const double spin_err = std::max({std::abs(r[0].s_system), std::abs(r[1].s_system - 1.0),
                                    std::abs(r[2].s_system)});
  const double mutual_err = std::max({std::abs(r[0].mutual_ac), std::abs(r[1].mutual_ac - 2.0),
                                      std::abs(r[2].mutual_ac)});
  double global = 0;
  for (const auto& row : r) global = std::max(global, row.s_global);
  double decorrelation = 0;
  for (std::size_t k = 0; k < lab.size(); ++k) {
    decorrelation = std::max(decorrelation, std::abs(r[2].extra[k].second));
  }
  const ComplexMatrix half = ComplexMatrix::Identity(2, 2) / 2.0;
  const double mixed_err = max_abs_diff(partial_trace(states[1], spin).matrix(), half);

  trace.checks.push_back(check("spin entropy 0 -> 1 -> 0", spin_err, 1e-9));
  trace.checks.push_back(check("mutual information 0 -> 2 -> 0", mutual_err, 1e-9));
  trace.checks.push_back(check("global entropy stays 0", global, 1e-9));
  trace.checks.push_back(check("measured spin is maximally mixed", mixed_err, 1e-12));
  trace.checks.push_back(check("spin returned to |->", r[2].extra[lab.size()].second, 1e-9));
  trace.checks.push_back(check("lab records decorrelated", decorrelation, 1e-9));
  trace.checks.push_back(check("entropy balance residual", max_residual, tol::balance));
  return trace;
}

// ---------------------------------------------------------------------------

ScenarioTrace energy_transfer_scenario(const EnergyTransferConfig& config) {
  const std::size_t n = config.n_field_qubits;
  if (config.detector_size < 1 || config.n_detectors < 1) {
    throw DimensionError("energy transfer needs at least one non-empty detector");
  }
  if (config.n_detectors * config.detector_size > n) {
    throw DimensionError("detectors cover more qubits than the field has");
  }
  const Dims dims(n, 2);
  const std::size_t d = total_dim(dims);

  std::vector<std::vector<std::size_t>> detectors;
  for (std::size_t k = 0; k < config.n_detectors; ++k) {
    detectors.push_back(range(k * config.detector_size, (k + 1) * config.detector_size));
  }
  const std::size_t covered = config.n_detectors * config.detector_size;
  const auto monitored = range(0, covered);
  const auto unmonitored = range(covered, n);
  const auto all = range(0, n);

  const ComplexMatrix scramble = config.identity_scramble
                                     ? ComplexMatrix(ComplexMatrix::Identity(d, d))
                                     : random_unitary(d, config.seed);

  std::vector<PureState> states = {PureState::basis(dims, 0)};
  states.emplace_back(dims, scramble * states[0].amplitudes());
  states.emplace_back(dims, scramble.adjoint() * states[1].amplitudes());
  const char* labels[] = {"field", "scramble", "recover"};

  ScenarioTrace trace;
  trace.scenario = "energy-transfer";
  trace.system_column = "S_detectors";

  for (std::size_t t = 0; t < states.size(); ++t) {
    const PureState& s = states[t];
    TraceRow row;
    row.step_label = labels[t];
    std::vector<std::pair<std::string, double>> entropies;
    std::vector<std::pair<std::string, double>> distances;
    for (std::size_t k = 0; k < detectors.size(); ++k) {
      const Bits sk = subsystem_entropy(s, detectors[k]);
      row.s_system += sk;
      entropies.emplace_back("S_det" + std::to_string(k), sk);
      distances.emplace_back("tdist_det" + std::to_string(k),
                             trace_distance_to_maximally_mixed(partial_trace(s, detectors[k])));
    }
    const Bits joint = subsystem_entropy(s, monitored);
    row.s_lab = subsystem_entropy(s, unmonitored);
    row.s_global = subsystem_entropy(s, all);
    row.mutual_ac = unmonitored.empty() ? 0.0 : joint + row.s_lab - row.s_global;
    row.extra.emplace_back("S_detectors_joint", joint);
    row.extra.insert(row.extra.end(), entropies.begin(), entropies.end());
    row.extra.insert(row.extra.end(), distances.begin(), distances.end());
    trace.rows.push_back(std::move(row));
  }

  double global = 0;
  for (const auto& row : trace.rows) global = std::max(global, row.s_global);
  double recovery = 0;
  for (std::size_t k = 0; k < detectors.size(); ++k) {
    const double before = trace.rows[0].extra[1 + k].second;
    const double after = trace.rows[2].extra[1 + k].second;
    recovery = std::max(recovery, std::abs(after - before));
  }
  trace.checks.push_back(check("global entropy stays 0", global, 1e-9));
  trace.checks.push_back(check("detector entropies recovered", recovery, 1e-9));
  if (!config.identity_scramble) {
    // Passes when the apparent (summed) detector entropy is strictly positive.
    trace.checks.push_back(check("apparent entropy positive after scramble",
                                 trace.rows[1].s_system > 0 ? 0.0 : 1.0, 0.0));
  }
  return trace;
}

}  // namespace qentropy
