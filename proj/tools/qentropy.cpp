// qentropy command-line front end.
//
//   qentropy run <file> [--seed S] [--format table|csv|json]
//   qentropy render <file>
//   qentropy scenario stern-gerlach|energy-transfer [options]
//   qentropy verify --suite NAME --instances N --seed S [--threads T]
//
// Exit status: 0 pass, 1 verification failure, 2 usage, parse or resource error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "qentropy/errors.hpp"
#include "qentropy/report.hpp"
#include "qentropy/scenarios.hpp"
#include "qentropy/script.hpp"
#include "qentropy/suites.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct RuntimeFailure {
  int status;
};

qentropy::Format format_or_throw(const std::string& name) {
  const auto f = qentropy::parse_format(name);
  if (!f) throw CLI::ValidationError("--format", "expected table, csv or json");
  return *f;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << path << ": error[io.open]: cannot open file\n";
    throw RuntimeFailure{kUsage};
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

qentropy::ScenarioScript load_script(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return qentropy::parse_script(text);
  } catch (const qentropy::ScriptError& e) {
    std::cerr << path << ":" << e.diagnostic().to_string() << "\n";
    throw RuntimeFailure{kUsage};
  }
}

int emit(const std::string& text, bool passed) {
  std::cout << text;
  std::cout.flush();
  return passed ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy bookkeeping for purified quantum systems"};
  app.require_subcommand(1);

  std::string file;
  std::uint64_t seed = 0;
  std::string format = "table";

  auto* run = app.add_subcommand("run", "Execute a scenario script");
  run->add_option("file", file, "Script path")->required();
  run->add_option("--seed", seed, "Seed for random steps");
  run->add_option("--format", format, "table, csv or json");

  auto* render = app.add_subcommand("render", "Print the canonical form of a script");
  render->add_option("file", file, "Script path")->required();

  std::string scenario;
  std::size_t lab_qubits = 3;
  qentropy::EnergyTransferConfig energy;
  bool identity_scramble = false;
  auto* scen = app.add_subcommand("scenario", "Run a built-in scenario");
  scen->add_option("name", scenario, "stern-gerlach or energy-transfer")
      ->required()
      ->check(CLI::IsMember({"stern-gerlach", "energy-transfer"}));
  scen->add_option("--seed", seed, "Seed");
  scen->add_option("--format", format, "table, csv or json");
  scen->add_option("--lab-qubits", lab_qubits, "Lab qubits (stern-gerlach)");
  scen->add_option("--field-qubits", energy.n_field_qubits, "Field qubits (energy-transfer)");
  scen->add_option("--detector-size", energy.detector_size, "Qubits per detector");
  scen->add_option("--detectors", energy.n_detectors, "Number of detectors");
  scen->add_flag("--identity-scramble", identity_scramble, "Replace the scramble with the identity");

  std::string suite;
  std::size_t instances = 0;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  auto* verify = app.add_subcommand("verify", "Run a randomized verification suite");
  verify->add_option("--suite", suite,
                     "balance, erasure-bound, concavity, subadditivity, data-processing, "
                     "classical-contrast")
      ->required();
  verify->add_option("--instances", instances, "Number of instances")->required();
  verify->add_option("--seed", seed, "Seed")->required();
  verify->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1u, 1024u));
  verify->add_option("--format", format, "table, csv or json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    const auto fmt = [&] {
      try {
        return format_or_throw(format);
      } catch (const CLI::ValidationError& e) {
        std::cerr << "error[usage]: " << e.what() << "\n";
        throw RuntimeFailure{kUsage};
      }
    }();

    if (*render) {
      std::cout << qentropy::render_script(load_script(file));
      return kPass;
    }
    if (*run) {
      const auto script = load_script(file);
      const auto result = qentropy::run_script(script, seed);
      return emit(qentropy::render(result.table, result.checks, fmt), result.passed());
    }
    if (*scen) {
      qentropy::ScenarioTrace trace;
      if (scenario == "stern-gerlach") {
        trace = qentropy::stern_gerlach_scenario(lab_qubits, seed);
      } else {
        energy.seed = seed;
        energy.identity_scramble = identity_scramble;
        trace = qentropy::energy_transfer_scenario(energy);
      }
      return emit(qentropy::render(qentropy::to_table(trace), trace.checks, fmt), trace.passed());
    }
    if (*verify) {
      const auto s = qentropy::parse_suite(suite);
      if (!s) {
        std::cerr << "error[usage]: unknown suite '" << suite << "'\n";
        return kUsage;
      }
      const auto report = qentropy::run_suite(*s, instances, seed, threads);
      return emit(qentropy::render(report, fmt), report.all_passed());
    }
  } catch (const RuntimeFailure& f) {
    return f.status;
  } catch (const qentropy::ResourceLimitError& e) {
    std::cerr << "error[runtime.resource_limit]: " << e.what() << "\n";
    return kUsage;
  } catch (const qentropy::DimensionError& e) {
    std::cerr << "error[runtime.dimension]: " << e.what() << "\n";
    return kUsage;
  } catch (const qentropy::ScriptError& e) {
    std::cerr << "error: " << e.diagnostic().to_string() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error[runtime.validation]: " << e.what() << "\n";
    return kFail;
  }
  return kUsage;
}
