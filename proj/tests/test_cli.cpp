#include "bioeco/cli.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include "catch_amalgamated.hpp"

#include "test_params.hpp"

using namespace bioeco;
using Catch::Matchers::WithinRel;

namespace {

std::string read_fixture(const std::string& name) {
  std::ifstream in(std::string(BIOECO_FIXTURE_DIR) + "/" + name);
  REQUIRE(in.good());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const char* kMinimalConfig = R"({
  "model": {"r": 3, "k": 500, "p": 0.2, "a": 0.008, "m": 0.005, "d": 0.04,
            "e": 0.15, "q1": 0.2, "q2": 0.6, "E1": 2, "E2": 2}
})";

}  // namespace

TEST_CASE("config round-trips through its serialized echo") {
  const RunConfig cfg = parse_config(read_fixture("sweep.json"));
  const std::string echoed = cli_detail::config_to_json(cfg).dump();
  CHECK(parse_config(echoed) == cfg);
}

TEST_CASE("unknown keys are rejected") {
  CHECK_THROWS_AS(parse_config(R"({"model": {"q3": 1}})"), UnknownKey);
  CHECK_THROWS_AS(parse_config(R"({"model": {}, "extra": {}})"), UnknownKey);
}

TEST_CASE("missing symbols are reported") {
  CHECK_THROWS_AS(parse_config(R"({"model": {"r": 3}})"), MissingSymbol);
  CHECK_THROWS_AS(parse_config(R"({"sweep": {"m_values": []}})"), MissingSymbol);
}

TEST_CASE("malformed documents are parse errors") {
  CHECK_THROWS_AS(parse_config("not json at all"), ParseError);
  CHECK_THROWS_AS(parse_config(R"({"model": {"r": "three"}})"), ParseError);
  CHECK_THROWS_AS(parse_config(R"([1, 2, 3])"), ParseError);
}

TEST_CASE("table fixture resolves to a seven-value sweep") {
  const RunConfig cfg = parse_config(read_fixture("sweep.json"));
  REQUIRE(cfg.sweep.has_value());
  CHECK(cfg.sweep->m_values.size() == 7);
  REQUIRE(cfg.output.has_value());
  CHECK(cfg.output->format == OutputFormat::Csv);
}

TEST_CASE("overrides reach the model and nested blocks") {
  const std::string text = apply_overrides(
      kMinimalConfig, {"m=0.02", "hopf.m_lo=0.001", "hopf.m_hi=0.02", "output.format=csv"});
  const RunConfig cfg = parse_config(text);
  CHECK(cfg.model.m == 0.02);
  REQUIRE(cfg.hopf.has_value());
  CHECK(cfg.hopf->m_lo == 0.001);
  REQUIRE(cfg.output.has_value());
  CHECK(cfg.output->format == OutputFormat::Csv);
}

TEST_CASE("overrides reject non-model bare keys") {
  CHECK_THROWS_AS(apply_overrides(kMinimalConfig, {"t_end=10"}), UnknownKey);
  CHECK_THROWS_AS(apply_overrides(kMinimalConfig, {"m time=3"}), UnknownKey);
  CHECK_THROWS_AS(apply_overrides(kMinimalConfig, {"no_equals"}), ParseError);
}

TEST_CASE("sweep command emits the seven published rows") {
  const RunConfig cfg = parse_config(read_fixture("sweep.json"));
  const RunOutcome out = run("sweep", cfg);
  CHECK(out.exit_code == 0);
  const auto& rows = out.envelope.results.at("rows");
  REQUIRE(rows.size() == 7);
  CHECK_THAT(rows[0].at("x_star").get<double>(), WithinRel(77.14, 5e-3));
  CHECK_THAT(rows[6].at("y_star").get<double>(), WithinRel(1.07, 5e-3));
}

TEST_CASE("optimal command reproduces the reference policy") {
  const RunConfig cfg = parse_config(read_fixture("optimal.json"));
  const RunOutcome out = run("optimal", cfg);
  CHECK(out.exit_code == 0);
  CHECK_THAT(out.envelope.results.at("x_opt").get<double>(), WithinRel(188.5858, 1e-2));
  CHECK_THAT(out.envelope.results.at("y_opt").get<double>(), WithinRel(30.6567, 1e-2));
  CHECK_THAT(out.envelope.results.at("e1_opt").get<double>(), WithinRel(1.8534, 1e-2));
}

TEST_CASE("inputs echo round-trips through run") {
  const RunConfig cfg = parse_config(read_fixture("optimal.json"));
  const RunOutcome out = run("optimal", cfg);
  CHECK(parse_config(out.envelope.inputs_echo.dump()) == cfg);
}

TEST_CASE("commands want their blocks") {
  const RunConfig cfg = parse_config(kMinimalConfig);
  CHECK_THROWS_AS(run("sweep", cfg), MissingSymbol);
  CHECK_THROWS_AS(run("hopf", cfg), MissingSymbol);
  CHECK_THROWS_AS(run("optimal", cfg), MissingSymbol);
  CHECK_THROWS_AS(run("simulate", cfg), MissingSymbol);
  CHECK_THROWS_AS(run("nonsense", cfg), ConfigError);
}

TEST_CASE("sweep CSV carries the pinned header") {
  const RunConfig cfg = parse_config(read_fixture("sweep.json"));
  const RunOutcome out = run("sweep", cfg);
  const std::string csv = emit(out.envelope, OutputFormat::Csv);
  CHECK(csv.rfind("m,x_star,y_star,classification\n", 0) == 0);
  // one header plus seven rows
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 8);
}

TEST_CASE("trajectory CSV is time ordered with the pinned header") {
  RunConfig cfg = parse_config(read_fixture("simulate.json"));
  cfg.sim->config.t_end = 50.0;  // keep the unit test quick
  const RunOutcome out = run("simulate", cfg);
  const std::string csv = emit(out.envelope, OutputFormat::Csv);
  REQUIRE(csv.rfind("t,x,y,valid\n", 0) == 0);
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  double prev = -1.0;
  while (std::getline(lines, line)) {
    const double t = std::stod(line.substr(0, line.find(',')));
    CHECK(t > prev);
    prev = t;
  }
}

TEST_CASE("emitting the same envelope twice is byte identical") {
  const RunConfig cfg = parse_config(read_fixture("sweep.json"));
  const RunOutcome out = run("sweep", cfg);
  CHECK(emit(out.envelope, OutputFormat::Csv) == emit(out.envelope, OutputFormat::Csv));
  CHECK(emit(out.envelope, OutputFormat::Json) == emit(out.envelope, OutputFormat::Json));
}

TEST_CASE("identical configs produce byte-identical output") {
  const RunConfig cfg = parse_config(read_fixture("sweep.json"));
  const std::string a = emit(run("sweep", cfg).envelope, OutputFormat::Json);
  const std::string b = emit(run("sweep", parse_config(read_fixture("sweep.json"))).envelope,
                             OutputFormat::Json);
  CHECK(a == b);
}

TEST_CASE("typo-correction diagnostics ride along the corrected paths") {
  {
    const RunConfig cfg = parse_config(read_fixture("optimal.json"));
    const RunOutcome out = run("bionomic", cfg);
    bool found = false;
    for (const std::string& d : out.envelope.diagnostics) {
      found = found || d.find("zero-rent identity x = c1/(p1*q1)") != std::string::npos;
    }
    CHECK(found);
  }
  {
    const RunConfig cfg = parse_config(read_fixture("sweep.json"));
    const RunOutcome out = run("sweep", cfg);
    bool found = false;
    for (const std::string& d : out.envelope.diagnostics) {
      found = found || d.find("predator nullcline") != std::string::npos;
    }
    CHECK(found);
  }
}

TEST_CASE("every command renders a CSV table with its header") {
  struct Row {
    const char* command;
    const char* fixture;
    const char* header;
  };
  const Row rows[] = {
      {"equilibria", "sweep.json", "kind,x,y,feasible,notes"},
      {"stability", "sweep.json", "kind,x,y,trace,determinant"},
      {"bionomic", "optimal.json", "case,exists,x_inf,y_inf"},
      {"optimal", "optimal.json", "x_opt,y_opt,e1_opt"},
      {"hopf", "hopf.json", "m_h,x,y,determinant"},
  };
  for (const Row& r : rows) {
    INFO(r.command);
    RunConfig cfg = parse_config(read_fixture(r.fixture));
    if (std::string(r.command) == "equilibria" || std::string(r.command) == "stability") {
      cfg.model.m = 0.015;
    }
    const RunOutcome out = run(r.command, cfg);
    CHECK(out.exit_code == 0);
    const std::string csv = emit(out.envelope, OutputFormat::Csv);
    CHECK(csv.rfind(r.header, 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') >= 2);
  }
}

TEST_CASE("hopf command surfaces the threshold") {
  const RunConfig cfg = parse_config(read_fixture("hopf.json"));
  const RunOutcome out = run("hopf", cfg);
  CHECK(out.exit_code == 0);
  const auto& roots = out.envelope.results.at("roots");
  REQUIRE(roots.size() == 1);
  CHECK_THAT(roots[0].at("m_h").get<double>(), WithinRel(0.010695, 1e-2));
  CHECK(roots[0].at("verdict").get<std::string>() == "Supercritical");
}

TEST_CASE("stability command flags the printed-condition disagreement") {
  RunConfig cfg = parse_config(kMinimalConfig);
  cfg.model.m = 0.015;  // stable interior point, first printed condition false
  const RunOutcome out = run("stability", cfg);
  bool found = false;
  for (const std::string& d : out.envelope.diagnostics) {
    found = found || d.find("eigenvalues are the ground truth") != std::string::npos;
  }
  CHECK(found);
}

TEST_CASE("check command runs every suite green") {
  RunConfig cfg = parse_config(kMinimalConfig);
  const RunOutcome out = run("check", cfg);
  CHECK(out.exit_code == 0);
  CHECK(out.envelope.results.at("all_passed").get<bool>());
  CHECK(out.envelope.results.at("suites").size() >= 10);
}
