// Command-line driver: frequency sweeps, resonance time series and
// relaxation time series of concurrence and discord for two NMR qubits.
//
// Exit codes: 0 success, 2 config error, 3 numerical-contract violation,
// 4 IO error.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nmrdiscord/config.hpp"
#include "nmrdiscord/emit.hpp"
#include "nmrdiscord/errors.hpp"
#include "nmrdiscord/experiment.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::string out_dir = ".";
  std::vector<std::string> formats;
  bool entropic = false;
  std::string angular_convention;
  std::optional<double> omega;
  std::optional<double> t_end;
  std::optional<double> t1;
  std::optional<double> t2;
  std::optional<double> dt;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "JSON experiment configuration")->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out_dir, "Output directory")->capture_default_str();
  cmd->add_option("--format", o.formats, "Output format (csv, json, svg); repeatable")
      ->check(CLI::IsMember({"csv", "json", "svg"}));
  cmd->add_flag("--entropic", o.entropic, "Also compute entropic discord (slow)");
  cmd->add_option("--angular-convention", o.angular_convention,
                  "paper: frequencies used as rad/s verbatim; 2pi: frequencies in Hz")
      ->check(CLI::IsMember({"paper", "2pi"}));
  cmd->add_option("--omega", o.omega, "Drive frequency (sweep: re-centres the window)");
  cmd->add_option("--t-end", o.t_end, "Final sample time [s] (sweep: the single snapshot time)");
}

nmrd::ExperimentConfig resolve(const std::string& command, const Overrides& o) {
  using namespace nmrd;
  ExperimentConfig c;
  if (!o.config_path.empty()) {
    c = load_config(o.config_path);
  } else if (command == "sweep") {
    c = frequency_sweep_config();
  } else if (command == "evolve") {
    c = resonance_evolution_config();
  } else {
    c = relaxation_config();
  }

  if (!o.formats.empty()) {
    c.outputs.clear();
    for (const auto& f : o.formats) c.outputs.push_back(parse_output_format(f));
  }
  if (o.entropic) c.entropic = true;
  if (!o.angular_convention.empty()) c.convention = parse_angular_convention(o.angular_convention);
  if (o.omega) {
    if (command == "sweep" && c.sweep) {
      const double a = c.parameters.a;
      const double lo = c.sweep->omega_min.value_or(a - 1e6), hi = c.sweep->omega_max.value_or(a + 1e6);
      c.sweep->omega_min = *o.omega - 0.5 * (hi - lo);
      c.sweep->omega_max = *o.omega + 0.5 * (hi - lo);
    }
    c.parameters.omega = *o.omega;
  }
  if (o.t_end) {
    if (command == "sweep") {
      c.times = std::vector<double>{*o.t_end};
    } else {
      const auto* grid = std::get_if<TimeGrid>(&c.times);
      c.times = TimeGrid{*o.t_end, grid ? grid->samples : 1001};
    }
  }
  if (o.t1 || o.t2) {
    if (!c.relaxation) c.relaxation = RelaxationSpec{};
    if (o.t1) c.relaxation->T1 = *o.t1;
    if (o.t2) c.relaxation->T2 = *o.t2;
  }
  if (o.dt) c.dt = *o.dt;
  validate_config(c);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-qubit NMR entanglement and discord dynamics"};
  app.require_subcommand(1);

  Overrides o;
  auto* sweep = app.add_subcommand("sweep", "Correlations versus drive frequency at fixed times");
  auto* evolve = app.add_subcommand("evolve", "Correlations versus time without relaxation");
  auto* relax = app.add_subcommand("relax", "Correlations versus time with T1/T2 relaxation");
  for (auto* cmd : {sweep, evolve, relax}) add_common(cmd, o);
  relax->add_option("--t1", o.t1, "Energy relaxation time T1 [s]");
  relax->add_option("--t2", o.t2, "Phase randomization time T2 [s]");
  relax->add_option("--dt", o.dt, "RK4 step for time-dependent drives [s]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help and version exit 0; any usage error counts as a config error.
    return app.exit(e) == 0 ? 0 : 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    const auto config = resolve(command, o);
    const auto table = nmrd::run_command(command, config);
    for (const auto& path : nmrd::emit(table, config.outputs, o.out_dir)) {
      std::cout << path.string() << '\n';
    }
  } catch (const nmrd::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const nmrd::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return 4;
  } catch (const nmrd::ConsistencyError& e) {
    std::cerr << "numerical contract violated: " << e.what() << '\n';
    return 3;
  } catch (const nmrd::ValidationError& e) {
    std::cerr << "numerical contract violated: " << e.what() << '\n';
    return 3;
  } catch (const nmrd::ContractError& e) {
    std::cerr << "numerical contract violated: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
