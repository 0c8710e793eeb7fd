#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "commands.hpp"
#include "config.hpp"

using namespace simplicial::cli;
using nlohmann::json;

namespace {

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& name) : path(std::filesystem::temp_directory_path() / name) {
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cli(const std::vector<std::string>& args, std::string* out = nullptr, std::string* err = nullptr) {
  std::ostringstream o, e;
  int code = run_cli(args, o, e);
  if (out) *out = o.str();
  if (err) *err = e.str();
  return code;
}

}  // namespace

TEST_CASE("config defaults, JSON and validation") {
  ExperimentConfig c;
  CHECK(c.seed == 42);
  CHECK(c.forman == "augmented");
  apply_json(c, R"({"n": 6, "radii": [0.5], "mask": "causal"})");
  CHECK(c.n == 6);
  CHECK(c.radii == std::vector<double>{0.5});
  CHECK_THROWS_AS(apply_json(c, R"({"bogus": 1})"), ConfigError);
  CHECK_THROWS_AS(apply_json(c, R"({"n": "six"})"), ConfigError);
  CHECK_THROWS_AS(apply_json(c, "{"), ConfigError);
  ExperimentConfig bad;
  bad.n = 0;
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = ExperimentConfig{};
  bad.mask = "file";
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = ExperimentConfig{};
  bad.weight_scale = -1;
  CHECK_THROWS_AS(validate(bad), ConfigError);
  ExperimentConfig round;
  apply_json(round, to_json(c));
  CHECK(to_json(round) == to_json(c));
}

TEST_CASE("every command runs on its defaults and is deterministic") {
  for (const auto& name : command_names()) {
    auto cfg = default_config(name);
    if (name == "curvature") cfg.batch = 50;
    auto a = run_command(name, cfg);
    auto b = run_command(name, cfg);
    CHECK_MESSAGE(a.exit_code == kExitOk, name);
    CHECK(a.files == b.files);
    CHECK_FALSE(a.files.empty());
    for (const auto& [file, body] : a.files) {
      if (file.ends_with(".csv")) CHECK(body.rfind("# schema=1\n", 0) == 0);
      if (file.ends_with(".json")) CHECK(json::parse(body)["schema"] == 1);
    }
  }
}

TEST_CASE("frozen collapse run") {
  auto out = run_command("collapse", default_config("collapse"));
  auto j = json::parse(out.files.at("collapse.json"));
  CHECK(j["status"] == "holds");
  CHECK(j["precision"]["bits"] == 2048);
  CHECK(j["precision"]["resolved"] == true);
  CHECK(j["cubic_slope"].get<double>() == doctest::Approx(3.2988251244021236).epsilon(1e-12));
  CHECK(j["final_log10_res_norm"].get<double>() == doctest::Approx(-562.4600093243786).epsilon(1e-12));
  CHECK(j["layers"].size() == 4);
}

TEST_CASE("collapse in double precision and outside the small regime") {
  auto cfg = default_config("collapse");
  cfg.precision = "double";
  cfg.layers = 1;
  auto d = json::parse(run_command("collapse", cfg).files.at("collapse.json"));
  CHECK(d["status"] == "holds");

  auto big = default_config("collapse");
  big.weight_scale = 30.0;
  big.layers = 1;
  auto out = run_command("collapse", big);
  auto j = json::parse(out.files.at("collapse.json"));
  CHECK(out.exit_code == kExitOk);
  CHECK(j["layers"][0]["precondition"] == false);
  CHECK(j["status"] == "not-applicable");

  auto masked = default_config("collapse");
  masked.mask = "causal";
  CHECK_THROWS_AS(run_command("collapse", masked), ConfigError);
}

TEST_CASE("frozen masked-collapse run") {
  auto out = run_command("masked-collapse", default_config("masked-collapse"));
  auto j = json::parse(out.files.at("masked_collapse.json"));
  CHECK(j["status"] == "holds");
  CHECK(j["radius"] == 1);
  CHECK(j["eps_hat"].get<double>() == doctest::Approx(0.06249971348927549).epsilon(1e-12));
  CHECK(j["trajectory"].size() == 7);
}

TEST_CASE("frozen lipschitz run") {
  auto out = run_command("lipschitz", default_config("lipschitz"));
  auto j = json::parse(out.files.at("lipschitz.json"));
  const double bound[] = {0.9396868008379808, 1.8811867861644638, 3.987607538006428};
  const double emp[] = {0.014310551186035437, 0.028621097419861154, 0.057242108128585954};
  REQUIRE(j["reports"].size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& r = j["reports"][i];
    CHECK(r["bound"].get<double>() == doctest::Approx(bound[i]).epsilon(1e-12));
    CHECK(r["empirical"].get<double>() == doctest::Approx(emp[i]).epsilon(1e-9));
    CHECK(r["V"].get<double>() == doctest::Approx(0.40756862261501925).epsilon(1e-12));
    CHECK(r["K"].get<double>() == doctest::Approx(0.4457556332170661).epsilon(1e-12));
    CHECK(r["holds"] == true);
  }
}

TEST_CASE("route-stats counts") {
  auto cfg = default_config("route-stats");
  auto j = json::parse(run_command("route-stats", cfg).files.at("route_stats.json"));
  (void)j;
  auto summary = run_command("route-stats", cfg).summary;
  CHECK(summary.find("16 simplexes selected of 64") != std::string::npos);
  cfg.k = 1;
  CHECK(run_command("route-stats", cfg).summary.find("4 simplexes") != std::string::npos);
  cfg.k = 4;
  CHECK(run_command("route-stats", cfg).summary.find("64 simplexes") != std::string::npos);
  cfg.k = 0;
  CHECK_THROWS(run_command("route-stats", cfg));
}

TEST_CASE("command input errors") {
  auto rope = default_config("rope-check");
  rope.d = 2;
  CHECK_THROWS(run_command("rope-check", rope));
  auto reduce = default_config("reduce-check");
  reduce.order = 1;
  CHECK_THROWS(run_command("reduce-check", reduce));
  auto empty = default_config("collapse");
  empty.layers = 0;
  CHECK(run_command("collapse", empty).exit_code == kExitOk);
  auto single = default_config("masked-collapse");
  single.n = 1;
  auto j = json::parse(run_command("masked-collapse", single).files.at("masked_collapse.json"));
  CHECK(j["radius"] == 0);
  CHECK_THROWS(run_command("no-such-command", default_config("collapse")));
}

TEST_CASE("run_cli exit codes and messages") {
  TempDir tmp("simplicial_cli_test");
  std::string out, err;
  CHECK(cli({"--help"}, &out) == kExitOk);
  CHECK(out.find("collapse") != std::string::npos);
  CHECK(cli({}, nullptr, &err) == kExitInputError);
  CHECK(cli({"collapse", "--n", "0", "--output", tmp.file("a")}, nullptr, &err) == kExitInputError);
  CHECK(err.find("config error") != std::string::npos);
  CHECK(cli({"collapse", "--n", "abc"}) == kExitInputError);

  std::ofstream(tmp.file("unknown.json")) << R"({"seeds": 3})";
  CHECK(cli({"collapse", "--config", tmp.file("unknown.json"), "--output", tmp.file("b")}, nullptr, &err) ==
        kExitInputError);
  CHECK(err.find("seeds") != std::string::npos);

  std::ofstream(tmp.file("split.txt")) << "3 2\n0: 0 0\n1: 1 1\n2: 2 2\n";
  CHECK(cli({"masked-collapse", "--n", "3", "--mask", "file", "--mask-file", tmp.file("split.txt"), "--output",
             tmp.file("c")},
            nullptr, &err) == kExitInputError);
  CHECK(err.find("cannot reach") != std::string::npos);
}

TEST_CASE("config file, flags and output precedence") {
  TempDir tmp("simplicial_cli_precedence");
  std::ofstream(tmp.file("cfg.json")) << R"({"instances": 3, "seed": 7, "output": ")" << tmp.file("from_file")
                                     << "\"}";
  std::string out;
  CHECK(cli({"reduce-check", "--config", tmp.file("cfg.json"), "--instances", "5"}, &out) == kExitOk);
  CHECK(out == "reduce-check: 5 of 5 exact\n");
  auto j = json::parse(slurp(tmp.file("from_file") + "/reduce_check.json"));
  CHECK(j["config"]["seed"] == 7);
  CHECK(j["config"]["instances"] == 5);
  CHECK_FALSE(j["config"].contains("output"));

  CHECK(cli({"reduce-check", "--config", tmp.file("cfg.json"), "--output", tmp.file("from_flag")}) == kExitOk);
  CHECK(std::filesystem::exists(tmp.file("from_flag") + "/reduce_check.json"));

  // Artifacts do not depend on where they are written.
  CHECK(cli({"rope-check", "--instances", "5", "--output", tmp.file("r1")}) == kExitOk);
  CHECK(cli({"rope-check", "--instances", "5", "--output", tmp.file("r2")}) == kExitOk);
  CHECK(slurp(tmp.file("r1") + "/rope_check.json") == slurp(tmp.file("r2") + "/rope_check.json"));
}

TEST_CASE("output directory from the environment yields to the flag") {
  TempDir tmp("simplicial_cli_env");
  ::setenv(kOutputEnv, tmp.file("env").c_str(), 1);
  CHECK(cli({"reduce-check", "--instances", "2"}) == kExitOk);
  CHECK(std::filesystem::exists(tmp.file("env") + "/reduce_check.json"));
  CHECK(cli({"reduce-check", "--instances", "2", "--output", tmp.file("flag")}) == kExitOk);
  CHECK(std::filesystem::exists(tmp.file("flag") + "/reduce_check.json"));
  ::unsetenv(kOutputEnv);
}
