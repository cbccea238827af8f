#include "nmrdiscord/experiment.hpp"

#include "nmrdiscord/errors.hpp"
#include "nmrdiscord/nmr_model.hpp"
#include "nmrdiscord/relaxation.hpp"

namespace nmrd {

ResultRow make_row(double omega, double t, const CorrelationReport& report) {
  ResultRow row;
  row.omega = omega;
  row.t = t;
  row.pseudo_concurrence = report.pseudo_concurrence;
  row.concurrence = std::max(0.0, report.pseudo_concurrence);
  row.geometric_discord = report.geometric_discord;
  row.entropic_discord = report.entropic_discord;
  row.min_eigenvalue = report.min_eigenvalue;
  return row;
}

ResultTable run_sweep(const ExperimentConfig& config) {
  validate_config(config);
  if (config.relaxation) throw ConfigError("sweep runs closed evolution; remove the 'relaxation' block");
  const auto omegas = sweep_frequencies(config);
  const auto times = sample_times(config);
  const NmrParameters base = effective_parameters(config);
  const TwoQubitDensityMatrix rho0 = resolve_state(config.initial_state);

  ResultTable table{"sweep", to_json(config), std::vector<ResultRow>(omegas.size() * times.size())};
  parallel_for(omegas.size(), [&](std::size_t i) {
    NmrParameters p = base;
    p.omega = omegas[i];
    const ClosedEvolution evo(p);
    for (std::size_t k = 0; k < times.size(); ++k) {
      const auto report = analyze(evo.evolve(rho0, times[k]), config.entropic);
      table.rows[k * omegas.size() + i] = make_row(p.omega, times[k], report);
    }
  });
  return table;
}

ResultTable run_evolve(const ExperimentConfig& config) {
  validate_config(config);
  if (config.relaxation) throw ConfigError("evolve runs closed evolution; use 'relax' for T1/T2 runs");
  const auto times = sample_times(config);
  const NmrParameters p = effective_parameters(config);
  const TwoQubitDensityMatrix rho0 = resolve_state(config.initial_state);
  const ClosedEvolution evo(p);

  ResultTable table{"evolve", to_json(config), std::vector<ResultRow>(times.size())};
  parallel_for(times.size(), [&](std::size_t k) {
    table.rows[k] = make_row(p.omega, times[k], analyze(evo.evolve(rho0, times[k]), config.entropic));
  });
  return table;
}

ResultTable run_relax(const ExperimentConfig& config) {
  validate_config(config);
  if (!config.relaxation) throw ConfigError("relax requires a 'relaxation' block");
  const auto times = sample_times(config);
  const NmrParameters p = effective_parameters(config);
  const TwoQubitDensityMatrix rho0 = resolve_state(config.initial_state);

  RelaxationParameters r{config.relaxation->T1, config.relaxation->T2, std::nullopt};
  if (config.relaxation->equilibrium) r.equilibrium = resolve_state(*config.relaxation->equilibrium);
  const Matrix4c& eq = r.equilibrium ? r.equilibrium->matrix() : rho0.matrix();

  const Generator gen = generator_elementwise(p, r);
  const Generator oracle = generator_kron_oracle(p, r);
  const double scale = std::max(1.0, oracle.A.cwiseAbs().maxCoeff());
  if ((gen.A - oracle.A).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw ConsistencyError("relaxation generator transcription disagrees with the Kronecker construction");
  }

  const Drive drive(eq, r, p.omega);
  const VectorizedState sigma0 = VectorizedState::from_density(rho0);
  std::vector<VectorizedState> states;
  if (drive.is_constant()) {
    states = closed_form_trajectory(gen, sigma0, drive, times);
  } else {
    states = solve_ode_at(gen, sigma0, drive, times, config.dt.value_or(max_stable_dt(gen, drive)));
  }

  ResultTable table{"relax", to_json(config), std::vector<ResultRow>(times.size())};
  parallel_for(times.size(), [&](std::size_t k) {
    const auto rho = recover_lab_frame(states[k], p.omega, times[k]);
    table.rows[k] = make_row(p.omega, times[k], analyze(rho, config.entropic));
  });
  return table;
}

ResultTable run_command(const std::string& command, const ExperimentConfig& config) {
  if (command == "sweep") return run_sweep(config);
  if (command == "evolve") return run_evolve(config);
  if (command == "relax") return run_relax(config);
  throw ConfigError("unknown command '" + command + "'");
}

}  // namespace nmrd
