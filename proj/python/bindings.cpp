#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "qentropy/channels.hpp"
#include "qentropy/entropy.hpp"
#include "qentropy/errors.hpp"
#include "qentropy/ledger.hpp"
#include "qentropy/report.hpp"
#include "qentropy/scenarios.hpp"
#include "qentropy/script.hpp"
#include "qentropy/states.hpp"
#include "qentropy/suites.hpp"
#include "qentropy/tolerances.hpp"

namespace py = pybind11;
using namespace qentropy;

namespace {

Format to_format(const std::string& name) {
  const auto f = parse_format(name);
  if (!f) throw py::value_error("unknown format '" + name + "' (expected table, csv or json)");
  return *f;
}

Suite to_suite(const std::string& name) {
  const auto s = parse_suite(name);
  if (!s) throw py::value_error("unknown suite '" + name + "'");
  return *s;
}

Partition to_partition(const std::string& blocks) {
  std::vector<Block> assignment;
  for (char b : blocks) {
    switch (b) {
      case 'A': assignment.push_back(Block::A); break;
      case 'C': assignment.push_back(Block::C); break;
      case 'R': assignment.push_back(Block::R); break;
      default: throw py::value_error(std::string("partition letters are A, C or R, got '") + b + "'");
    }
  }
  return Partition(std::move(assignment));
}

std::string block_letters(const Partition& p) {
  std::string out;
  for (Block b : p.assignment()) out += b == Block::A ? 'A' : b == Block::C ? 'C' : 'R';
  return out;
}

py::dict table_dict(const Table& t) {
  py::dict d;
  d["columns"] = t.columns;
  d["labels"] = t.labels;
  d["rows"] = t.rows;
  return d;
}

}  // namespace

PYBIND11_MODULE(_qentropy, m) {
  m.doc() = "Entropy bookkeeping for purified quantum systems";

  static py::exception<DimensionError> dimension_error(m, "DimensionError", PyExc_ValueError);
  static py::exception<ValidationError> validation_error(m, "ValidationError", PyExc_ValueError);
  static py::exception<PartitionError> partition_error(m, "PartitionError", PyExc_ValueError);
  static py::exception<ResourceLimitError> resource_error(m, "ResourceLimitError", PyExc_MemoryError);
  static py::exception<ScriptError> script_error(m, "ScriptError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ScriptError& e) {
      const Diagnostic& d = e.diagnostic();
      py::object err = py::reinterpret_borrow<py::object>(script_error)(e.what());
      err.attr("code") = d.code;
      err.attr("line") = d.line;
      err.attr("column") = d.column;
      err.attr("identifier") = d.identifier;
      err.attr("expected") = d.expected;
      PyErr_SetObject(script_error.ptr(), err.ptr());
    } catch (const DimensionError& e) {
      PyErr_SetString(dimension_error.ptr(), e.what());
    } catch (const ValidationError& e) {
      PyErr_SetString(validation_error.ptr(), e.what());
    } catch (const PartitionError& e) {
      PyErr_SetString(partition_error.ptr(), e.what());
    } catch (const ResourceLimitError& e) {
      PyErr_SetString(resource_error.ptr(), e.what());
    }
  });

  m.attr("MAX_HILBERT_DIM") = kMaxHilbertDim;

  py::class_<DensityMatrix>(m, "DensityMatrix")
      .def(py::init<Dims, ComplexMatrix>(), py::arg("dims"), py::arg("matrix"))
      .def_static("maximally_mixed", &DensityMatrix::maximally_mixed, py::arg("dims"))
      .def_property_readonly("dims", &DensityMatrix::dims)
      .def_property_readonly("matrix", &DensityMatrix::matrix)
      .def("spectrum", &DensityMatrix::spectrum)
      .def("purity", &DensityMatrix::purity)
      .def("__repr__", [](const DensityMatrix& r) { return "<DensityMatrix dim=" + std::to_string(r.dim()) + ">"; });

  py::class_<PureState>(m, "PureState")
      .def(py::init<Dims, ComplexVector>(), py::arg("dims"), py::arg("amplitudes"))
      .def_static("basis", &PureState::basis, py::arg("dims"), py::arg("index"))
      .def_property_readonly("dims", &PureState::dims)
      .def_property_readonly("amplitudes", &PureState::amplitudes)
      .def("to_density", &PureState::to_density)
      .def("__repr__", [](const PureState& s) { return "<PureState dim=" + std::to_string(s.dim()) + ">"; });

  py::class_<Partition>(m, "Partition")
      .def(py::init(&to_partition), py::arg("blocks"), "One letter (A, C or R) per subsystem, e.g. \"ACR\".")
      .def("indices", [](const Partition& p, char b) { return p.indices(to_partition(std::string(1, b)).block_of(0)); })
      .def("__str__", &block_letters)
      .def("__repr__", [](const Partition& p) { return "Partition('" + block_letters(p) + "')"; });

  py::class_<KrausChannel>(m, "KrausChannel")
      .def(py::init<std::vector<ComplexMatrix>>(), py::arg("operators"))
      .def_property_readonly("operators", &KrausChannel::operators)
      .def_property_readonly("in_dim", &KrausChannel::in_dim)
      .def_property_readonly("out_dim", &KrausChannel::out_dim);

  py::class_<Povm>(m, "Povm")
      .def(py::init<std::vector<ComplexMatrix>>(), py::arg("elements"))
      .def_static("computational", &Povm::computational, py::arg("dim"))
      .def_property_readonly("elements", &Povm::elements);

  py::class_<RandomUnitaryMap>(m, "RandomUnitaryMap")
      .def(py::init([](const std::vector<std::pair<double, ComplexMatrix>>& branches) {
             std::vector<RandomUnitaryMap::Branch> b;
             for (const auto& [p, u] : branches) b.push_back({p, u});
             return RandomUnitaryMap(std::move(b));
           }),
           py::arg("branches"), "List of (probability, unitary) pairs.")
      .def_property_readonly("branches",
                             [](const RandomUnitaryMap& map) {
                               std::vector<std::pair<double, ComplexMatrix>> out;
                               for (const auto& b : map.branches()) out.emplace_back(b.probability, b.unitary);
                               return out;
                             })
      .def("to_kraus", &RandomUnitaryMap::to_kraus);

  m.def("tensor", py::overload_cast<const DensityMatrix&, const DensityMatrix&>(&tensor));
  m.def("tensor", py::overload_cast<const PureState&, const PureState&>(&tensor));
  m.def("partial_trace",
        [](const DensityMatrix& rho, const std::vector<std::size_t>& keep) { return partial_trace(rho, keep); },
        py::arg("rho"), py::arg("keep"));
  m.def("partial_trace",
        [](const PureState& psi, const std::vector<std::size_t>& keep) { return partial_trace(psi, keep); },
        py::arg("psi"), py::arg("keep"));
  m.def("purify", &purify, py::arg("rho"));
  m.def("random_pure_state", &random_pure_state, py::arg("dims"), py::arg("seed"));
  m.def("random_density", &random_density, py::arg("dim"), py::arg("rank"), py::arg("seed"));
  m.def("random_unitary", &random_unitary, py::arg("dim"), py::arg("seed"));
  m.def("random_povm", &random_povm, py::arg("dim"), py::arg("outcomes"), py::arg("seed"));
  m.def("random_channel", &random_channel, py::arg("in_dim"), py::arg("out_dim"), py::arg("n_ops"),
        py::arg("seed"));
  m.def("random_unitary_map", &random_unitary_map, py::arg("dim"), py::arg("branches"), py::arg("seed"));
  m.def(
      "apply_local",
      [](const ComplexMatrix& op, const std::vector<std::size_t>& targets, const PureState& psi) {
        return apply_local(op, targets, psi);
      },
      py::arg("op"), py::arg("targets"), py::arg("psi"));
  m.def("apply_unitary", &apply_unitary, py::arg("u"), py::arg("rho"));
  m.def("apply_channel", &apply_channel, py::arg("channel"), py::arg("rho"));
  m.def("apply_random_unitary_map", &apply_random_unitary_map, py::arg("map"), py::arg("rho"));

  m.def("von_neumann_entropy", py::overload_cast<const DensityMatrix&>(&von_neumann_entropy), py::arg("rho"));
  m.def("von_neumann_entropy", py::overload_cast<const PureState&>(&von_neumann_entropy), py::arg("psi"));
  m.def("shannon_entropy", [](const std::vector<double>& p) { return shannon_entropy(p); }, py::arg("p"));
  m.def(
      "subsystem_entropy",
      [](const PureState& psi, const std::vector<std::size_t>& keep) { return subsystem_entropy(psi, keep); },
      py::arg("psi"), py::arg("subsystems"));
  m.def("relative_entropy", &relative_entropy, py::arg("rho"), py::arg("sigma"),
        "Returns inf when the support of rho is not contained in that of sigma.");
  m.def("mutual_information", &mutual_information, py::arg("rho_ac"), py::arg("partition"));
  m.def(
      "classical_mutual_information",
      [](const Eigen::MatrixXd& p) { return classical_mutual_information(JointDistribution(p)); },
      py::arg("joint"));
  m.def(
      "joint_local_distribution",
      [](const DensityMatrix& rho, const Partition& part, const Povm& a, const Povm& c) {
        return Eigen::MatrixXd(joint_local_distribution(rho, part, a, c).probabilities());
      },
      py::arg("rho_ac"), py::arg("partition"), py::arg("povm_a"), py::arg("povm_c"));

  py::class_<BlockEntropies>(m, "BlockEntropies")
      .def_readonly("a", &BlockEntropies::a)
      .def_readonly("c", &BlockEntropies::c)
      .def_readonly("r", &BlockEntropies::r)
      .def_readonly("ac", &BlockEntropies::ac)
      .def_property_readonly("mutual", &BlockEntropies::mutual);

  py::class_<LedgerRecord>(m, "LedgerRecord")
      .def_readonly("label", &LedgerRecord::label)
      .def_readonly("dS_A", &LedgerRecord::dS_A)
      .def_readonly("dS_C", &LedgerRecord::dS_C)
      .def_readonly("dS_R", &LedgerRecord::dS_R)
      .def_readonly("dS_mutual", &LedgerRecord::dS_mutual)
      .def_readonly("residual", &LedgerRecord::residual)
      .def_readonly("purification_gap", &LedgerRecord::purification_gap);

  py::class_<BoundRecord>(m, "BoundRecord")
      .def_readonly("quantum_mi", &BoundRecord::quantum_mi)
      .def_readonly("classical_mi", &BoundRecord::classical_mi)
      .def_readonly("slack", &BoundRecord::slack);

  m.def("block_entropies", &block_entropies, py::arg("psi"), py::arg("partition"));
  m.def(
      "entropy_ledger",
      [](const PureState& psi, const Evolution& e, const Partition& p) { return entropy_ledger(psi, e, p); },
      py::arg("initial"), py::arg("evolution"), py::arg("partition"));
  m.def(
      "entropy_ledger",
      [](const DensityMatrix& rho, const Evolution& e, const Partition& p) { return entropy_ledger(rho, e, p); },
      py::arg("initial"), py::arg("evolution"), py::arg("partition"));
  m.def("two_stage_ledger", &two_stage_ledger, py::arg("initial"), py::arg("rise"), py::arg("fall"),
        py::arg("partition"));
  m.def("verify_erasure_bound", &verify_erasure_bound, py::arg("rho_ac"), py::arg("partition"),
        py::arg("povm_a"), py::arg("povm_c"));

  py::class_<TraceRow>(m, "TraceRow")
      .def_readonly("step", &TraceRow::step_label)
      .def_readonly("s_system", &TraceRow::s_system)
      .def_readonly("s_lab", &TraceRow::s_lab)
      .def_readonly("s_global", &TraceRow::s_global)
      .def_readonly("mutual_ac", &TraceRow::mutual_ac)
      .def_property_readonly("extra", [](const TraceRow& r) {
        py::dict d;
        for (const auto& [k, v] : r.extra) d[py::str(k)] = v;
        return d;
      });

  py::class_<ScenarioCheck>(m, "ScenarioCheck")
      .def_readonly("name", &ScenarioCheck::name)
      .def_readonly("value", &ScenarioCheck::value)
      .def_readonly("tolerance", &ScenarioCheck::tolerance)
      .def_readonly("passed", &ScenarioCheck::passed);

  py::class_<ScenarioTrace>(m, "ScenarioTrace")
      .def_readonly("scenario", &ScenarioTrace::scenario)
      .def_readonly("rows", &ScenarioTrace::rows)
      .def_readonly("checks", &ScenarioTrace::checks)
      .def("passed", &ScenarioTrace::passed)
      .def("table", [](const ScenarioTrace& t) { return table_dict(to_table(t)); })
      .def(
          "render",
          [](const ScenarioTrace& t, const std::string& format) {
            return render(to_table(t), t.checks, to_format(format));
          },
          py::arg("format") = "table");

  m.def("stern_gerlach", &stern_gerlach_scenario, py::arg("lab_qubits") = 3, py::arg("seed") = 0);
  m.def(
      "energy_transfer",
      [](std::size_t field, std::size_t size, std::size_t detectors, std::uint64_t seed, bool identity) {
        return energy_transfer_scenario({field, size, detectors, seed, identity});
      },
      py::arg("field_qubits") = 8, py::arg("detector_size") = 1, py::arg("detectors") = 4, py::arg("seed") = 0,
      py::arg("identity_scramble") = false);

  py::class_<SuiteReport>(m, "SuiteReport")
      .def_property_readonly("suite", [](const SuiteReport& r) { return std::string(suite_name(r.suite)); })
      .def_readonly("metric", &SuiteReport::metric)
      .def_readonly("tolerance", &SuiteReport::tolerance)
      .def_readonly("instances", &SuiteReport::instances)
      .def_readonly("passed", &SuiteReport::passed)
      .def_readonly("variant_instances", &SuiteReport::variant_instances)
      .def_readonly("worst", &SuiteReport::worst)
      .def_readonly("failures", &SuiteReport::failures)
      .def("all_passed", &SuiteReport::all_passed)
      .def(
          "render", [](const SuiteReport& r, const std::string& format) { return render(r, to_format(format)); },
          py::arg("format") = "table");

  m.def("suite_names", [] {
    std::vector<std::string> names;
    for (Suite s : all_suites()) names.emplace_back(suite_name(s));
    return names;
  });
  m.def(
      "run_suite",
      [](const std::string& suite, std::size_t instances, std::uint64_t seed, unsigned threads) {
        const Suite s = to_suite(suite);
        py::gil_scoped_release release;
        return run_suite(s, instances, seed, threads);
      },
      py::arg("suite"), py::arg("instances"), py::arg("seed"), py::arg("threads") = 1);
  m.def("bell_witness", [] {
    const ContrastWitness w = bell_witness();
    return py::make_tuple(w.joint, w.subsystem);
  });

  py::class_<ScenarioScript>(m, "Script")
      .def("render", &render_script)
      .def("__eq__", [](const ScenarioScript& a, const ScenarioScript& b) { return a == b; })
      .def_property_readonly("systems",
                             [](const ScenarioScript& s) {
                               std::vector<std::pair<std::string, std::size_t>> out;
                               for (const auto& d : s.systems) out.emplace_back(d.name, d.dim);
                               return out;
                             })
      .def_property_readonly("steps", [](const ScenarioScript& s) {
        std::vector<std::string> out;
        for (const auto& d : s.steps) out.push_back(d.label);
        return out;
      });

  py::class_<ScriptRun>(m, "ScriptRun")
      .def_readonly("checks", &ScriptRun::checks)
      .def("passed", &ScriptRun::passed)
      .def("table", [](const ScriptRun& r) { return table_dict(r.table); })
      .def(
          "render",
          [](const ScriptRun& r, const std::string& format) { return render(r.table, r.checks, to_format(format)); },
          py::arg("format") = "table");

  m.def("parse_script", py::overload_cast<std::string_view>(&parse_script), py::arg("text"));
  m.def("render_script", &render_script, py::arg("script"));
  m.def("run_script", &run_script, py::arg("script"), py::arg("seed") = 0);
}
