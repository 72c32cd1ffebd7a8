// Command-line scenario runner: run, compare, gen.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "irsim/fixtures.hpp"
#include "irsim/generator.hpp"
#include "irsim/report.hpp"
#include "irsim/scenario.hpp"

namespace fs = std::filesystem;
using namespace irsim;

namespace {

enum Exit { kOk = 0, kValidation = 2, kNonConvergence = 3, kIo = 4 };

struct RunArgs {
  std::string scenario;
  std::string topology;
  std::vector<std::string> protocols;
  std::string out;
  std::string format = "json";
  std::optional<Tick> quiesce_limit;
  bool strict = true;
};

void add_run_flags(CLI::App* cmd, RunArgs& args) {
  cmd->add_option("--scenario", args.scenario, "Scenario JSON file")->required();
  cmd->add_option("--topology", args.topology,
                  "Topology file (overrides the scenario's); fixture:<name> selects a bundled one");
  cmd->add_option("--protocol", args.protocols, "Protocol variant (repeatable)")
      ->check(CLI::IsMember({"bgp", "rbgp", "miro", "yamr", "yamr_hiding"}));
  cmd->add_option("--format", args.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--quiesce-limit", args.quiesce_limit, "Ticks allowed after the last event");
  cmd->add_flag("--strict,!--no-strict", args.strict, "Reject unknown scenario fields (default on)");
}

AsGraph load_graph(const RunArgs& args, const ScenarioSpec& spec) {
  std::string source = args.topology;
  if (source.empty()) {
    if (!spec.topology) throw ValidationError("no topology given (use --topology or the scenario's topology)");
    source = spec.topology->string();
  }
  if (source.rfind("fixture:", 0) == 0) return load_fixture(source.substr(8));
  return load_topology_file(source);
}

std::vector<Protocol> protocols_for(const RunArgs& args, const ScenarioSpec& spec) {
  std::vector<Protocol> out;
  for (const std::string& name : args.protocols) {
    const Protocol p = *parse_protocol(name);
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  }
  if (out.empty()) out = spec.protocols;
  if (out.empty()) out.push_back(Protocol::Bgp);
  return out;
}

std::vector<MetricsReport> simulate(const RunArgs& args, std::vector<Protocol>& protocols) {
  ScenarioSpec spec = load_scenario_file(args.scenario, args.strict);
  if (args.quiesce_limit) spec.quiesce_limit = *args.quiesce_limit;
  const AsGraph graph = load_graph(args, spec);
  validate_scenario(spec, graph);
  protocols = protocols_for(args, spec);
  std::vector<MetricsReport> reports;
  for (Protocol p : protocols) reports.push_back(run(graph, sim_config(spec, p), spec.scenario));
  return reports;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("cannot write " + path.string());
}

ReportFormat format_of(const std::string& name) {
  return name == "csv" ? ReportFormat::Csv : ReportFormat::Json;
}

int finish(const std::vector<MetricsReport>& reports) {
  for (const MetricsReport& r : reports) {
    if (!r.converged) {
      std::cerr << "irsim: " << r.protocol << " did not converge within the quiesce limit\n";
      return kNonConvergence;
    }
  }
  return kOk;
}

int cmd_run(const RunArgs& args) {
  std::vector<Protocol> protocols;
  const auto reports = simulate(args, protocols);
  const ReportFormat format = format_of(args.format);
  if (args.out.empty()) {
    for (const MetricsReport& r : reports) std::cout << format_report(r, format);
  } else {
    std::error_code ec;
    fs::create_directories(args.out, ec);
    if (ec) throw IoError("cannot create " + args.out + ": " + ec.message());
    for (const MetricsReport& r : reports) {
      write_file(fs::path(args.out) / (r.protocol + "." + args.format), format_report(r, format));
    }
  }
  return finish(reports);
}

int cmd_compare(const RunArgs& args) {
  std::vector<Protocol> protocols;
  const auto reports = simulate(args, protocols);
  if (reports.size() < 2) throw ValidationError("compare needs at least two protocols");
  const std::string table = format_compare(reports, format_of(args.format));
  if (args.out.empty()) {
    std::cout << table;
  } else {
    write_file(args.out, table);
  }
  return finish(reports);
}

int cmd_gen(std::size_t n, std::uint64_t seed, const std::string& out) {
  const std::string text = serialize_topology(generate_topology(n, seed));
  if (out.empty()) {
    std::cout << text;
  } else {
    write_file(out, text);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interdomain routing simulator"};
  app.require_subcommand(0, 1);

  std::vector<std::string> top_gen;
  app.add_option("--gen", top_gen, "Generate a random topology: --gen N SEED")->expected(2);

  RunArgs run_args;
  CLI::App* run_cmd = app.add_subcommand("run", "Run a scenario under one or more protocols");
  add_run_flags(run_cmd, run_args);
  run_cmd->add_option("--out", run_args.out, "Output directory (one <protocol>.<format> per run)");

  RunArgs cmp_args;
  CLI::App* cmp_cmd = app.add_subcommand("compare", "Side-by-side metrics for two or more protocols");
  add_run_flags(cmp_cmd, cmp_args);
  cmp_cmd->add_option("--out", cmp_args.out, "Output file");

  std::size_t gen_n = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Generate a random GR-consistent topology");
  gen_cmd->add_option("n", gen_n, "Number of ASes")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("seed", gen_seed, "Random seed")->required();
  gen_cmd->add_option("--out", gen_out, "Output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Error& e) {
    app.exit(e);
    return kValidation;
  }

  try {
    if (!top_gen.empty()) {
      std::size_t n = 0;
      std::uint64_t seed = 0;
      try {
        n = std::stoul(top_gen[0]);
        seed = std::stoull(top_gen[1]);
      } catch (const std::exception&) {
        throw ValidationError("--gen expects two non-negative integers");
      }
      if (n == 0) throw ValidationError("--gen needs at least one AS");
      return cmd_gen(n, seed, "");
    }
    if (*run_cmd) return cmd_run(run_args);
    if (*cmp_cmd) return cmd_compare(cmp_args);
    if (*gen_cmd) return cmd_gen(gen_n, gen_seed, gen_out);
    std::cerr << app.help();
    return kValidation;
  } catch (const IoError& e) {
    std::cerr << "irsim: " << e.what() << "\n";
    return kIo;
  } catch (const ValidationError& e) {
    std::cerr << "irsim: " << e.what() << "\n";
    return kValidation;
  }
}
