#include <doctest.h>

#include <cmath>
#include <sstream>

#include "nmrdiscord/config.hpp"
#include "nmrdiscord/emit.hpp"
#include "nmrdiscord/errors.hpp"
#include "nmrdiscord/experiment.hpp"

using namespace nmrd;
using nlohmann::json;

namespace {

ExperimentConfig small_sweep(double t) {
  auto cfg = frequency_sweep_config();
  cfg.sweep->points = 21;
  cfg.times = std::vector<double>{t};
  return cfg;
}

int count_lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("defaults") {
    const auto cfg = parse_config(json::object());
    CHECK(cfg.parameters.a == 3e8);
    CHECK(cfg.convention == AngularConvention::paper);
    CHECK_FALSE(cfg.relaxation.has_value());
    CHECK_FALSE(cfg.sweep.has_value());
  }
  SUBCASE("full document round-trips") {
    const auto doc = json::parse(R"({
      "parameters": {"a": 1e5, "b": 2e3, "c": 50, "d": 1e3, "e": 2e3, "omega": 1e5},
      "angular_convention": "2pi",
      "initial_state": "bell_phi_plus",
      "relaxation": {"T1": 5, "T2": "inf"},
      "sweep": {"omega_min": 9e4, "omega_max": 1.1e5, "points": 11},
      "times": {"t_end": 0.01, "samples": 5},
      "outputs": ["csv", "json"],
      "entropic": true,
      "solver": {"dt": 1e-7}
    })");
    const auto cfg = parse_config(doc);
    CHECK(cfg.convention == AngularConvention::two_pi);
    CHECK(std::isinf(cfg.relaxation->T2));
    CHECK(cfg.sweep->points == 11);
    CHECK(sample_times(cfg).size() == 5);
    CHECK(sample_times(cfg).back() == 0.01);
    CHECK(frequency_scale(cfg) == doctest::Approx(2 * M_PI));
    CHECK(effective_parameters(cfg).a == doctest::Approx(2 * M_PI * 1e5));
    CHECK(sweep_frequencies(cfg).front() == doctest::Approx(2 * M_PI * 9e4));
    CHECK(*cfg.dt == 1e-7);
    const auto again = parse_config(to_json(cfg));
    CHECK(to_json(again) == to_json(cfg));
  }
  SUBCASE("explicit state") {
    const auto doc = json::parse(R"({"initial_state": {"real": [[0.5,0,0,0.5],[0,0,0,0],[0,0,0,0],[0.5,0,0,0.5]],
                                                       "imag": [[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]}})");
    const auto rho = resolve_state(parse_config(doc).initial_state);
    CHECK(std::abs(rho(0, 3) - cplx(0.5)) < 1e-15);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(sweep_frequencies(parse_config(json::parse(R"({"times": [0.001]})"))), ConfigError);
    CHECK_THROWS_AS(validate_config(parse_config(json::parse(R"({"sweep": {"points": 1}})"))), ConfigError);
    CHECK_THROWS_AS(validate_config(parse_config(json::parse(R"({"times": [0.1, 0.1]})"))), ConfigError);
    CHECK_THROWS_AS(validate_config(parse_config(json::parse(R"({"times": [-1]})"))), ConfigError);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"initial_state": "nope"})")), ConfigError);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"angular_convention": "degrees"})")), ConfigError);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"outputs": ["png"]})")), ConfigError);
    CHECK_THROWS_AS(validate_config(parse_config(json::parse(R"({"relaxation": {"T1": 0}})"))), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
  }
  SUBCASE("empty sweep block takes the default window") {
    const auto cfg = parse_config(json::parse(R"({"sweep": {}})"));
    const auto w = sweep_frequencies(cfg);
    CHECK(w.size() == 2001);
    CHECK(w.front() == doctest::Approx(3e8 - 1e6));
    CHECK(w.back() == doctest::Approx(3e8 + 1e6));
  }
}

TEST_CASE("figure configurations") {
  CHECK_NOTHROW(validate_config(frequency_sweep_config()));
  CHECK_NOTHROW(validate_config(resonance_evolution_config()));
  CHECK_NOTHROW(validate_config(relaxation_config()));
  CHECK(sample_times(resonance_evolution_config()).back() == 1e-3);
  CHECK(relaxation_config().relaxation->T1 == 20.0);
  CHECK(relaxation_config().relaxation->T2 == 1.0);
}

TEST_CASE("sweep") {
  SUBCASE("no correlations at t = 0") {
    const auto table = run_sweep(small_sweep(0.0));
    REQUIRE(table.rows.size() == 21);
    for (const auto& r : table.rows) {
      CHECK(std::abs(r.pseudo_concurrence) < 1e-12);
      CHECK(r.concurrence < 1e-12);
      CHECK(r.geometric_discord < 1e-15);
    }
  }
  SUBCASE("no driving, no correlations") {
    auto cfg = small_sweep(1e-3);
    cfg.parameters.d = cfg.parameters.e = 0;
    for (const auto& r : run_sweep(cfg).rows) {
      CHECK(r.concurrence < 1e-12);
      CHECK(r.geometric_discord < 1e-15);
    }
  }
  SUBCASE("row order") {
    auto cfg = small_sweep(1e-3);
    cfg.times = std::vector<double>{1e-5, 1e-3};
    const auto rows = run_sweep(cfg).rows;
    REQUIRE(rows.size() == 42);
    CHECK(rows[0].t == 1e-5);
    CHECK(rows[20].t == 1e-5);
    CHECK(rows[21].t == 1e-3);
    CHECK(rows[1].omega > rows[0].omega);
  }
  SUBCASE("rejects relaxation") {
    auto cfg = small_sweep(1e-3);
    cfg.relaxation = RelaxationSpec{};
    CHECK_THROWS_AS(run_sweep(cfg), ConfigError);
  }
}

TEST_CASE("evolve at resonance oscillates") {
  auto cfg = resonance_evolution_config();
  cfg.times = TimeGrid{1e-3, 401};
  const auto table = run_evolve(cfg);
  REQUIRE(table.rows.size() == 401);
  double hi = 0, lo = 1;
  for (std::size_t k = 1; k < table.rows.size(); ++k) {
    hi = std::max(hi, table.rows[k].pseudo_concurrence);
    lo = std::min(lo, table.rows[k].pseudo_concurrence);
    CHECK(table.rows[k].concurrence >= 0.0);
    CHECK(table.rows[k].concurrence <= 1.0);
  }
  CHECK(hi > 0.1);
  CHECK(lo < 0.01);
}

TEST_CASE("relax without decay matches evolve") {
  auto cfg = resonance_evolution_config();
  cfg.times = TimeGrid{1e-4, 11};
  const auto closed = run_evolve(cfg);
  cfg.relaxation = RelaxationSpec{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
                                  std::nullopt};
  const auto relaxed = run_relax(cfg);
  REQUIRE(relaxed.rows.size() == closed.rows.size());
  for (std::size_t k = 0; k < closed.rows.size(); ++k) {
    CHECK(std::abs(relaxed.rows[k].pseudo_concurrence - closed.rows[k].pseudo_concurrence) < 1e-8);
    CHECK(std::abs(relaxed.rows[k].geometric_discord - closed.rows[k].geometric_discord) < 1e-8);
  }
}

TEST_CASE("relax with an oscillating drive uses RK4") {
  auto cfg = resonance_evolution_config();
  cfg.parameters = NmrParameters{2e5, 1e3, 30, 5e3, 5e3, 2e5};
  cfg.initial_state.name = "bell_phi_plus";
  cfg.relaxation = RelaxationSpec{1e-3, 5e-4, std::nullopt};
  cfg.times = TimeGrid{2e-4, 5};
  const auto table = run_relax(cfg);
  REQUIRE(table.rows.size() == 5);
  CHECK(table.rows[0].concurrence == doctest::Approx(1.0));
  for (const auto& r : table.rows) CHECK(r.min_eigenvalue > -1e-8);
}

TEST_CASE("emit") {
  ResultTable empty{"sweep", json::object(), {}};
  CHECK(to_csv(empty) == std::string(kCsvHeader) + "\n");

  ResultTable one{"evolve", json::object(), {ResultRow{3e8, 1e-3, -0.25, 0.0, 0.0625, std::nullopt, 0.1}}};
  const auto csv = to_csv(one);
  CHECK(count_lines(csv) == 2);
  CHECK(csv.find("3e+08,0.001,-0.25,0,0.0625,,0.1") != std::string::npos);

  SUBCASE("format_number round-trips") {
    for (double x : {0.1, 1.0 / 3.0, 3e8 + 0.5, -1e-300, 6.02214076e23}) CHECK(std::stod(format_number(x)) == x);
  }

  SUBCASE("json keeps full precision") {
    auto cfg = resonance_evolution_config();
    cfg.times = TimeGrid{1e-4, 7};
    const auto table = run_evolve(cfg);
    const auto back = json::parse(to_json(table).dump(2));
    REQUIRE(back["rows"].size() == table.rows.size());
    for (std::size_t k = 0; k < table.rows.size(); ++k) {
      CHECK(back["rows"][k]["geometric_discord"].get<double>() == table.rows[k].geometric_discord);
      CHECK(back["rows"][k]["t"].get<double>() == table.rows[k].t);
    }
    CHECK(back["command"] == "evolve");
    CHECK(back["config"].contains("parameters"));
  }

  SUBCASE("deterministic and well-formed") {
    auto cfg = small_sweep(1e-3);
    const auto a = to_csv(run_sweep(cfg));
    const auto b = to_csv(run_sweep(cfg));
    CHECK(a == b);
    const auto table = run_sweep(cfg);
    for (const auto& r : table.rows) {
      CHECK(r.concurrence == std::max(0.0, r.pseudo_concurrence));
      CHECK(r.geometric_discord >= 0.0);
    }
    const auto svg = to_svg(table, Measure::geometric_discord);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("polyline") != std::string::npos);
  }

  SUBCASE("writes files") {
    const auto dir = std::filesystem::temp_directory_path() / "nmrdiscord_emit_test";
    std::filesystem::remove_all(dir);
    const std::vector<OutputFormat> formats{OutputFormat::csv, OutputFormat::json, OutputFormat::svg};
    const auto paths = emit(one, formats, dir);
    for (const auto& p : paths) CHECK(std::filesystem::exists(p));
    CHECK(std::filesystem::exists(dir / "evolve.csv"));
    std::filesystem::remove_all(dir);
    CHECK_THROWS_AS(emit(one, formats, "/proc/nmrdiscord_forbidden"), IoError);
  }
}
