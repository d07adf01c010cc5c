#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "heatbasis/cli.hpp"

using namespace heatbasis;
using namespace heatbasis::cli;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kConfigs = HEATBASIS_CONFIG_DIR;

json load(const std::string& name) {
  std::ifstream in(kConfigs / name);
  return json::parse(in);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("heatbasis_test_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

struct Invocation {
  int status = -1;
  std::string stderr_text;
};

Invocation invoke(const std::string& args, const fs::path& dir) {
  const fs::path err = dir / "stderr.txt";
  const std::string cmd = std::string("\"") + HEATBASIS_CLI + "\" " + args + " 2> \"" + err.string() + "\"";
  const int raw = std::system(cmd.c_str());
  Invocation r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.stderr_text = slurp(err);
  return r;
}

std::string error_code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

json tiny_continue() {
  return json{{"command", "continue"},
              {"small", {{"base", {{"kind", "ball"}, {"center", {0, 0}}, {"radius", 0.5}}}, {"t", {0, 1}}}},
              {"big", {{"base", {{"kind", "ball"}, {"center", {0, 0}}, {"radius", 1.0}}}, {"t", {0, 1}}}},
              {"dictionary", {{"heat_degree", 1}}},
              {"resolution", {{"small", {{"radial", 4}, {"angular", 8}, {"temporal", 4}}},
                              {"big", {{"radial", 4}, {"angular", 8}, {"temporal", 4}}}}},
              {"target", {{"kind", "heat_polynomial"}, {"degrees", {1, 0}}}},
              {"n_trunc", {1, 3}}};
}

}  // namespace

TEST(Commands, NamesRoundTrip) {
  for (const auto& [c, name] : command_names()) {
    EXPECT_EQ(to_string(c), name);
    EXPECT_EQ(parse_command(name), c);
  }
  EXPECT_EQ(command_names().size(), 5u);
  EXPECT_EQ(error_code_of([] { parse_command("fit"); }), "invalid-config");
}

TEST(ParseConfig, SampleConfigsAreValid) {
  for (const auto* name : {"bessel_zeros.json", "basis_ball.json", "continue_ball.json", "density_hole.json",
                           "density_nohole.json", "green_disk.json"})
    EXPECT_NO_THROW(parse_config(load(name))) << name;
}

TEST(ParseConfig, CanonicalEchoIsAFixedPoint) {
  for (const auto* name : {"bessel_zeros.json", "basis_ball.json", "continue_ball.json", "density_hole.json",
                           "density_nohole.json", "green_disk.json"}) {
    const json echo = to_json(parse_config(load(name)));
    EXPECT_EQ(to_json(parse_config(echo)), echo) << name;
  }
}

TEST(ParseConfig, Rejections) {
  auto code = [](json j) { return error_code_of([&] { parse_config(j); }); };
  json j = load("continue_ball.json");
  j["big"]["t"] = {1, 0};
  EXPECT_EQ(code(j), "invalid-config");
  j = load("continue_ball.json");
  j["small"]["base"]["radius"] = 1.0;
  EXPECT_EQ(code(j), "invalid-config");
  j = load("continue_ball.json");
  j["tolerances"]["cholesky"] = 1.5;
  EXPECT_EQ(code(j), "invalid-config");
  j = load("continue_ball.json");
  j["extra"] = 1;
  EXPECT_EQ(code(j), "invalid-config");
  j = load("continue_ball.json");
  j.erase("target");
  EXPECT_EQ(code(j), "invalid-config");
  j = load("continue_ball.json");
  j["dictionary"] = json::object();
  EXPECT_EQ(code(j), "invalid-config");
  j = load("bessel_zeros.json");
  j["bessel"]["kinds"] = {"second"};
  EXPECT_EQ(code(j), "invalid-config");
  j = load("density_hole.json");
  j["density"]["hole_radius"] = 0.7;
  EXPECT_EQ(code(j), "invalid-config");
  j = load("green_disk.json");
  j["points"][0]["t"] = 2.0;
  EXPECT_EQ(code(j), "invalid-config");
  j = load("bessel_zeros.json");
  j.erase("command");
  EXPECT_EQ(code(j), "invalid-config");
  EXPECT_EQ(error_code_of([] { parse_config(load("bessel_zeros.json"), Command::Density); }), "invalid-config");
}

TEST(Csv, FormatAndRoundTrip) {
  EXPECT_EQ(format_real(1.0), "1.0000000000000000e+00");
  EXPECT_EQ(format_real(-0.1), "-1.0000000000000001e-01");
  const double v = 0.1234567890123456789;
  EXPECT_EQ(std::stod(format_real(v)), v);
  CsvTable t{{"a", "b"}, {{"1", format_real(v)}, {"x", ""}}};
  const CsvTable back = parse_csv(write_csv(t));
  EXPECT_EQ(back.header, t.header);
  EXPECT_EQ(back.rows, t.rows);
  EXPECT_EQ(back.real(0, "b"), v);
  EXPECT_THROW(back.column("c"), InvalidArgument);
  EXPECT_THROW(parse_csv("a,b\n1\n"), InvalidArgument);
  EXPECT_THROW(parse_csv(""), InvalidArgument);
}

TEST(Run, BesselZerosTable) {
  const Outputs out = run(parse_config(load("bessel_zeros.json")));
  ASSERT_TRUE(out.count("zeros.csv"));
  ASSERT_TRUE(out.count("config.json"));
  const CsvTable t = parse_csv(out.at("zeros.csv"));
  ASSERT_EQ(t.rows.size(), 12u);
  EXPECT_EQ(t.header, (std::vector<std::string>{"nu", "kind", "m", "zero"}));
  EXPECT_NEAR(t.real(0, "zero"), 2.404825557695773, 1e-12);
  EXPECT_EQ(t.rows[3][t.column("kind")], "derivative");
  EXPECT_NEAR(t.real(3, "zero"), 3.831705970207512, 1e-12);
}

TEST(Run, ContinueRejectsTruncationAboveRank) {
  json j = tiny_continue();
  const Outputs ok = run(parse_config(j));
  EXPECT_EQ(parse_csv(ok.at("continuation.csv")).rows.size(), 2u);
  j["n_trunc"] = {4};
  EXPECT_EQ(error_code_of([&] { run(parse_config(j)); }), "invalid-config");
}

TEST(Run, EchoReproducesOutputs) {
  const ExperimentConfig c = parse_config(tiny_continue());
  const Outputs a = run(c);
  const Outputs b = run(parse_config(json::parse(a.at("config.json"))));
  EXPECT_EQ(a, b);
}

TEST(ExitCodes, Mapping) {
  EXPECT_EQ(exit_code("invalid-config"), 2);
  EXPECT_EQ(exit_code("convergence"), 3);
  EXPECT_EQ(exit_code("truncation-required"), 3);
  EXPECT_EQ(exit_code("not-psd"), 3);
  EXPECT_EQ(exit_code("domain"), 1);
  const json e = json::parse(error_line("invalid-config", "bad \"x\"\nline"));
  EXPECT_EQ(e.at("error"), "invalid-config");
  EXPECT_EQ(error_line("a", "b\nc").find('\n'), std::string::npos);
}

TEST(Execute, WritesFilesAndReportsErrors) {
  const fs::path dir = scratch("execute");
  std::ostringstream err;
  EXPECT_EQ(execute("bessel-zeros", kConfigs / "bessel_zeros.json", dir / "out", err), 0);
  EXPECT_TRUE(err.str().empty());
  EXPECT_TRUE(fs::exists(dir / "out" / "zeros.csv"));
  EXPECT_TRUE(fs::exists(dir / "out" / "config.json"));
  std::ostringstream err2;
  EXPECT_EQ(execute("density", kConfigs / "bessel_zeros.json", dir / "out2", err2), 2);
  EXPECT_EQ(json::parse(err2.str()).at("error"), "invalid-config");
  std::ofstream(dir / "broken.json") << "{ not json";
  std::ostringstream err3;
  EXPECT_EQ(execute("bessel-zeros", dir / "broken.json", dir / "out3", err3), 2);
  std::ostringstream err4;
  EXPECT_EQ(execute("bessel-zeros", dir / "missing.json", dir / "out4", err4), 2);
}

TEST(Binary, RunsSubcommandAndIsDeterministic) {
  const fs::path dir = scratch("binary");
  const std::string cfg = "--config \"" + (kConfigs / "bessel_zeros.json").string() + "\"";
  const auto a = invoke("bessel-zeros " + cfg + " --out \"" + (dir / "a").string() + "\"", dir);
  const auto b = invoke("bessel-zeros " + cfg + " --out \"" + (dir / "b").string() + "\"", dir);
  EXPECT_EQ(a.status, 0) << a.stderr_text;
  EXPECT_EQ(b.status, 0) << b.stderr_text;
  EXPECT_EQ(slurp(dir / "a" / "zeros.csv"), slurp(dir / "b" / "zeros.csv"));
  EXPECT_FALSE(slurp(dir / "a" / "zeros.csv").empty());
}

TEST(Binary, InvalidConfigExitsWithTwoAndOneJsonLine) {
  const fs::path dir = scratch("invalid");
  json j = load("continue_ball.json");
  j["big"]["t"] = {1, 1};
  j["small"]["t"] = {1, 1};
  std::ofstream(dir / "bad.json") << j.dump();
  const auto r = invoke("continue --config \"" + (dir / "bad.json").string() + "\" --out \"" + (dir / "o").string() + "\"", dir);
  EXPECT_EQ(r.status, 2);
  ASSERT_FALSE(r.stderr_text.empty());
  EXPECT_EQ(r.stderr_text.find('\n'), r.stderr_text.size() - 1);
  EXPECT_EQ(json::parse(r.stderr_text).at("error"), "invalid-config");
  EXPECT_FALSE(fs::exists(dir / "o"));
}

TEST(Binary, UsageErrors) {
  const fs::path dir = scratch("usage");
  EXPECT_EQ(invoke("bessel-zeros", dir).status, 2);
  EXPECT_EQ(invoke("no-such-command --config x.json", dir).status, 2);
  const auto r = invoke("", dir);
  EXPECT_EQ(r.status, 2);
  EXPECT_EQ(json::parse(r.stderr_text).at("error"), "invalid-config");
}
