#include "nmrdiscord/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

#include "nmrdiscord/errors.hpp"

namespace nmrd {

using nlohmann::json;

namespace {

double number_or_infinity(const json& v, const char* what) {
  if (v.is_null()) return std::numeric_limits<double>::infinity();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    throw ConfigError(std::string(what) + ": expected a number, null or \"inf\"");
  }
  if (!v.is_number()) throw ConfigError(std::string(what) + ": expected a number");
  return v.get<double>();
}

json infinity_as_json(double v) { return std::isinf(v) ? json("inf") : json(v); }

double get_number(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

Matrix4c parse_matrix(const json& j) {
  if (!j.is_object() || !j.contains("real")) {
    throw ConfigError("explicit state must be an object with 'real' and optional 'imag' 4x4 arrays");
  }
  Matrix4c m = Matrix4c::Zero();
  auto fill = [&](const json& rows, bool imag) {
    if (!rows.is_array() || rows.size() != 4) throw ConfigError("state matrix must have 4 rows");
    for (int i = 0; i < 4; ++i) {
      if (!rows[i].is_array() || rows[i].size() != 4) throw ConfigError("state matrix rows must have 4 entries");
      for (int k = 0; k < 4; ++k) {
        if (!rows[i][k].is_number()) throw ConfigError("state matrix entries must be numbers");
        const double x = rows[i][k].get<double>();
        m(i, k) += imag ? cplx(0.0, x) : cplx(x, 0.0);
      }
    }
  };
  fill(j.at("real"), false);
  if (j.contains("imag")) fill(j.at("imag"), true);
  return m;
}

StateSpec parse_state(const json& j) {
  StateSpec s;
  if (j.is_string()) {
    s.name = j.get<std::string>();
    resolve_state(s);
    return s;
  }
  s.name = "explicit";
  s.matrix = parse_matrix(j);
  resolve_state(s);
  return s;
}

json state_to_json(const StateSpec& s) {
  if (s.name != "explicit") return s.name;
  json re = json::array(), im = json::array();
  for (int i = 0; i < 4; ++i) {
    json rr = json::array(), ri = json::array();
    for (int k = 0; k < 4; ++k) {
      rr.push_back(s.matrix(i, k).real());
      ri.push_back(s.matrix(i, k).imag());
    }
    re.push_back(rr);
    im.push_back(ri);
  }
  return json{{"real", re}, {"imag", im}};
}

}  // namespace

std::string to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::csv:
      return "csv";
    case OutputFormat::json:
      return "json";
    case OutputFormat::svg:
      return "svg";
  }
  return "csv";
}

OutputFormat parse_output_format(const std::string& s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  if (s == "svg") return OutputFormat::svg;
  throw ConfigError("unknown output format '" + s + "' (expected csv, json or svg)");
}

AngularConvention parse_angular_convention(const std::string& s) {
  if (s == "paper") return AngularConvention::paper;
  if (s == "2pi") return AngularConvention::two_pi;
  throw ConfigError("unknown angular convention '" + s + "' (expected paper or 2pi)");
}

TwoQubitDensityMatrix resolve_state(const StateSpec& spec) {
  auto basis = [](int k) {
    Matrix4c m = Matrix4c::Zero();
    m(k, k) = 1.0;
    return validate_density(m);
  };
  if (spec.name == "00") return basis(0);
  if (spec.name == "01") return basis(1);
  if (spec.name == "10") return basis(2);
  if (spec.name == "11") return basis(3);
  if (spec.name == "bell_phi_plus") return states::bell_phi_plus();
  if (spec.name == "maximally_mixed") return states::maximally_mixed();
  if (spec.name == "explicit") {
    try {
      return validate_density(spec.matrix);
    } catch (const ValidationError& e) {
      throw ConfigError(std::string("initial state: ") + e.what());
    }
  }
  throw ConfigError("unknown named state '" + spec.name + "'");
}

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig c;
  try {
    if (doc.contains("parameters")) {
      const json& p = doc.at("parameters");
      if (!p.is_object()) throw ConfigError("'parameters' must be an object");
      c.parameters.a = get_number(p, "a", c.parameters.a);
      c.parameters.b = get_number(p, "b", c.parameters.b);
      c.parameters.c = get_number(p, "c", c.parameters.c);
      c.parameters.d = get_number(p, "d", c.parameters.d);
      c.parameters.e = get_number(p, "e", c.parameters.e);
      c.parameters.omega = get_number(p, "omega", c.parameters.a);
    }
    if (doc.contains("angular_convention")) {
      c.convention = parse_angular_convention(doc.at("angular_convention").get<std::string>());
    }
    if (doc.contains("initial_state")) c.initial_state = parse_state(doc.at("initial_state"));
    if (doc.contains("relaxation") && !doc.at("relaxation").is_null()) {
      const json& r = doc.at("relaxation");
      if (!r.is_object()) throw ConfigError("'relaxation' must be an object");
      if (!r.contains("T1") || !r.contains("T2")) {
        throw ConfigError("'relaxation' requires both T1 and T2");
      }
      RelaxationSpec rs;
      rs.T1 = number_or_infinity(r.at("T1"), "relaxation.T1");
      rs.T2 = number_or_infinity(r.at("T2"), "relaxation.T2");
      if (r.contains("equilibrium")) {
        const json& eq = r.at("equilibrium");
        if (!(eq.is_string() && eq.get<std::string>() == "initial")) rs.equilibrium = parse_state(eq);
      }
      c.relaxation = rs;
    }
    if (doc.contains("sweep") && !doc.at("sweep").is_null()) {
      const json& s = doc.at("sweep");
      if (!s.is_object()) throw ConfigError("'sweep' must be an object");
      SweepSpec sw;
      if (s.contains("omega_min")) sw.omega_min = get_number(s, "omega_min", 0.0);
      if (s.contains("omega_max")) sw.omega_max = get_number(s, "omega_max", 0.0);
      if (s.contains("points")) {
        if (!s.at("points").is_number_integer()) throw ConfigError("'sweep.points' must be an integer");
        sw.points = s.at("points").get<int>();
      }
      c.sweep = sw;
    }
    if (doc.contains("times")) {
      const json& t = doc.at("times");
      if (t.is_array()) {
        std::vector<double> list;
        for (const auto& x : t) {
          if (!x.is_number()) throw ConfigError("'times' entries must be numbers");
          list.push_back(x.get<double>());
        }
        c.times = list;
      } else if (t.is_object()) {
        TimeGrid g;
        g.t_end = get_number(t, "t_end", 0.0);
        if (t.contains("samples")) {
          if (!t.at("samples").is_number_integer()) throw ConfigError("'times.samples' must be an integer");
          g.samples = t.at("samples").get<int>();
        }
        c.times = g;
      } else {
        throw ConfigError("'times' must be an array or {t_end, samples}");
      }
    }
    if (doc.contains("outputs")) {
      c.outputs.clear();
      for (const auto& o : doc.at("outputs")) c.outputs.push_back(parse_output_format(o.get<std::string>()));
    }
    if (doc.contains("entropic")) c.entropic = doc.at("entropic").get<bool>();
    if (doc.contains("solver") && doc.at("solver").contains("dt")) {
      c.dt = get_number(doc.at("solver"), "dt", 0.0);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  validate_config(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

json to_json(const ExperimentConfig& c) {
  json doc;
  doc["parameters"] = {{"a", c.parameters.a}, {"b", c.parameters.b}, {"c", c.parameters.c},
                       {"d", c.parameters.d}, {"e", c.parameters.e}, {"omega", c.parameters.omega}};
  doc["angular_convention"] = c.convention == AngularConvention::paper ? "paper" : "2pi";
  doc["initial_state"] = state_to_json(c.initial_state);
  if (c.relaxation) {
    json r{{"T1", infinity_as_json(c.relaxation->T1)}, {"T2", infinity_as_json(c.relaxation->T2)}};
    r["equilibrium"] = c.relaxation->equilibrium ? state_to_json(*c.relaxation->equilibrium) : json("initial");
    doc["relaxation"] = r;
  } else {
    doc["relaxation"] = nullptr;
  }
  if (c.sweep) {
    const double a = c.parameters.a;
    doc["sweep"] = {{"omega_min", c.sweep->omega_min.value_or(a - 1e6)},
                    {"omega_max", c.sweep->omega_max.value_or(a + 1e6)},
                    {"points", c.sweep->points}};
  } else {
    doc["sweep"] = nullptr;
  }
  if (const auto* list = std::get_if<std::vector<double>>(&c.times)) {
    doc["times"] = *list;
  } else {
    const auto& g = std::get<TimeGrid>(c.times);
    doc["times"] = {{"t_end", g.t_end}, {"samples", g.samples}};
  }
  json outs = json::array();
  for (auto f : c.outputs) outs.push_back(to_string(f));
  doc["outputs"] = outs;
  doc["entropic"] = c.entropic;
  doc["solver"] = {{"dt", c.dt ? json(*c.dt) : json(nullptr)}};
  return doc;
}

void validate_config(const ExperimentConfig& c) {
  try {
    c.parameters.validate();
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
  if (c.sweep) {
    if (c.sweep->points < 2) throw ConfigError("sweep.points must be at least 2");
    const double a = c.parameters.a;
    if (!(c.sweep->omega_min.value_or(a - 1e6) < c.sweep->omega_max.value_or(a + 1e6))) {
      throw ConfigError("sweep.omega_min must be below sweep.omega_max");
    }
  }
  if (const auto* list = std::get_if<std::vector<double>>(&c.times)) {
    if (list->empty()) throw ConfigError("times must not be empty");
    for (std::size_t i = 0; i < list->size(); ++i) {
      if (!std::isfinite((*list)[i]) || (*list)[i] < 0.0) throw ConfigError("sample times must be non-negative");
      if (i > 0 && !((*list)[i] > (*list)[i - 1])) throw ConfigError("sample times must be strictly increasing");
    }
  } else {
    const auto& g = std::get<TimeGrid>(c.times);
    if (!(g.t_end > 0.0) || !std::isfinite(g.t_end)) throw ConfigError("times.t_end must be positive");
    if (g.samples < 2) throw ConfigError("times.samples must be at least 2");
  }
  if (c.relaxation) {
    if (!(c.relaxation->T1 > 0.0) || !(c.relaxation->T2 > 0.0)) {
      throw ConfigError("relaxation T1 and T2 must be positive");
    }
  }
  if (c.dt && !(*c.dt > 0.0)) throw ConfigError("solver.dt must be positive");
  if (c.outputs.empty()) throw ConfigError("at least one output format is required");
}

double frequency_scale(const ExperimentConfig& c) {
  return c.convention == AngularConvention::two_pi ? 2.0 * std::numbers::pi : 1.0;
}

NmrParameters effective_parameters(const ExperimentConfig& c) {
  return c.parameters.scaled(frequency_scale(c));
}

std::vector<double> sample_times(const ExperimentConfig& c) {
  if (const auto* list = std::get_if<std::vector<double>>(&c.times)) return *list;
  const auto& g = std::get<TimeGrid>(c.times);
  std::vector<double> out(static_cast<std::size_t>(g.samples));
  for (int k = 0; k < g.samples; ++k) out[k] = g.t_end * k / (g.samples - 1);
  return out;
}

std::vector<double> sweep_frequencies(const ExperimentConfig& c) {
  if (!c.sweep) throw ConfigError("sweep command requires a 'sweep' block");
  const double a = c.parameters.a;
  const double lo = c.sweep->omega_min.value_or(a - 1e6);
  const double hi = c.sweep->omega_max.value_or(a + 1e6);
  const double k = frequency_scale(c);
  std::vector<double> out(static_cast<std::size_t>(c.sweep->points));
  for (int i = 0; i < c.sweep->points; ++i) {
    out[i] = k * (lo + (hi - lo) * i / (c.sweep->points - 1));
  }
  return out;
}

ExperimentConfig frequency_sweep_config() {
  ExperimentConfig c;
  c.sweep = SweepSpec{};
  c.times = std::vector<double>{1e-5, 1e-3, 1e-1};
  c.outputs = {OutputFormat::csv, OutputFormat::json, OutputFormat::svg};
  return c;
}

ExperimentConfig resonance_evolution_config() {
  ExperimentConfig c;
  c.times = TimeGrid{1e-3, 2001};
  c.outputs = {OutputFormat::csv, OutputFormat::json, OutputFormat::svg};
  return c;
}

ExperimentConfig relaxation_config() {
  ExperimentConfig c;
  c.relaxation = RelaxationSpec{20.0, 1.0, std::nullopt};
  c.times = TimeGrid{10.0, 20001};
  c.outputs = {OutputFormat::csv, OutputFormat::json, OutputFormat::svg};
  return c;
}

}  // namespace nmrd
