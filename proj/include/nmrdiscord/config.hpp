#pragma once

// Experiment configuration: a single JSON document, optionally adjusted by
// command-line overrides.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "nmrdiscord/nmr_model.hpp"
#include "nmrdiscord/qcore.hpp"

namespace nmrd {

enum class AngularConvention { paper, two_pi };
enum class OutputFormat { csv, json, svg };

struct SweepSpec {
  // Empty bounds default to a ± 1e6 (in the config's frequency units).
  std::optional<double> omega_min;
  std::optional<double> omega_max;
  int points = 2001;
};

struct TimeGrid {
  double t_end = 0.0;
  int samples = 1001;
};

// Either an explicit list of sample times or an even grid on [0, t_end].
using TimeSpec = std::variant<std::vector<double>, TimeGrid>;

// A named state ("00", "01", "10", "11", "bell_phi_plus", "maximally_mixed")
// or an explicit matrix (name == "explicit").
struct StateSpec {
  std::string name = "00";
  Matrix4c matrix = Matrix4c::Zero();
};

struct RelaxationSpec {
  double T1 = 20.0;
  double T2 = 1.0;
  // Empty: relax toward the initial state.
  std::optional<StateSpec> equilibrium;
};

struct ExperimentConfig {
  NmrParameters parameters;
  AngularConvention convention = AngularConvention::paper;
  std::optional<RelaxationSpec> relaxation;
  StateSpec initial_state;
  std::optional<SweepSpec> sweep;
  TimeSpec times = std::vector<double>{0.0};
  std::vector<OutputFormat> outputs{OutputFormat::csv};
  bool entropic = false;
  // RK4 step for time-dependent drives; defaults to the stability bound.
  std::optional<double> dt;
};

// Throws ConfigError on malformed or invalid input.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);
nlohmann::json to_json(const ExperimentConfig& config);

// Checks structural invariants (sweep points ≥ 2, increasing non-negative
// times, valid physical parameters). Throws ConfigError.
void validate_config(const ExperimentConfig& config);

// Parameters in rad/s after applying the angular convention.
NmrParameters effective_parameters(const ExperimentConfig& config);
// Conversion factor from config units to rad/s.
double frequency_scale(const ExperimentConfig& config);
std::vector<double> sample_times(const ExperimentConfig& config);
// Sweep frequencies in rad/s; throws ConfigError if no sweep block.
std::vector<double> sweep_frequencies(const ExperimentConfig& config);
TwoQubitDensityMatrix resolve_state(const StateSpec& spec);

// The configurations used for the three reference figure families.
ExperimentConfig frequency_sweep_config();
ExperimentConfig resonance_evolution_config();
ExperimentConfig relaxation_config();

std::string to_string(OutputFormat f);
OutputFormat parse_output_format(const std::string& s);
AngularConvention parse_angular_convention(const std::string& s);

}  // namespace nmrd
