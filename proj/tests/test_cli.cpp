#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using J = nlohmann::ordered_json;

namespace {

struct Run {
  int code = -1;
  std::string out, err;
};

fs::path scratch() {
  static fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("stabwc_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Run run(const std::string& args) {
  const char* bin = std::getenv("STABWC_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "STABWC_BIN is not set");
  fs::path err = scratch() / "stderr.txt";
  std::string cmd = std::string(bin) + " " + args + " 2>" + err.string();
  Run r;
  FILE* p = ::popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, p)) > 0;) r.out.append(buf, n);
  int st = ::pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  r.err = slurp(err);
  return r;
}

J json_of(const std::string& args) {
  auto r = run(args + " --format json --quiet");
  REQUIRE_MESSAGE(r.code == 0, r.err);
  return J::parse(r.out);
}

void write(const fs::path& p, const std::string& s) { std::ofstream(p, std::ios::binary) << s; }

}  // namespace

TEST_CASE("walls of the chain") {
  auto doc = json_of("walls --scenario chain:3,3");
  CHECK(doc["schema_version"] == 1);
  REQUIRE(doc["sections"].size() == 1);
  const auto& s = doc["sections"][0];
  CHECK(s["kind"] == "walls");
  REQUIRE(s["walls"].size() == 3);
  CHECK(s["walls"][0]["equation"] == "-3 eps1 + eps2 = 0");
  CHECK(s["walls"][1]["equation"] == "eps1 - 3 eps2 = 0");
  // eps1 (n1 - 1) + eps2 (n2 - 1) = 0, printed with the geometric chamber on the positive side
  CHECK(s["walls"][2]["equation"] == "-eps1 - eps2 = 0");
  CHECK(s["chamber_count"] == 6);
  std::vector<std::string> labels;
  for (const auto& c : s["chambers"]) labels.push_back(c["label"]);
  CHECK(labels == std::vector<std::string>{"C1", "C2", "C3", "C4", "C5", "C6"});
  CHECK(s["chambers"][3]["report"].contains("unavailable"));
  CHECK(s["chambers"][2]["report"]["components"].size() == 3);
  for (const auto& w : s["walls"]) CHECK(w["sum_is_point"] == true);
}

TEST_CASE("walls of disjoint curves and of a single (-1)-curve") {
  auto d = json_of("walls --scenario disjoint:3,4")["sections"][0];
  REQUIRE(d["walls"].size() == 2);
  CHECK(d["walls"][0]["coefficients"] == J::array({"-1", "0"}));
  CHECK(d["walls"][1]["coefficients"] == J::array({"0", "-1"}));
  CHECK(d["chamber_count"] == 4);
  CHECK(d["walls"][0]["singularity"] == "1/3(1,1)");
  CHECK(d["walls"][1]["singularity"] == "1/4(1,1)");

  auto s = json_of("walls --scenario single:1")["sections"][0];
  CHECK(s["walls"].size() == 1);
  REQUIRE(s["chambers"].size() == 2);
  const auto& plus = s["chambers"][1]["report"]["components"];
  REQUIRE(plus.size() == 1);
  CHECK(plus[0]["name"] == "T");
}

TEST_CASE("ext on the single curve") {
  auto p = json_of("ext --scenario single:4 --pair 'OC,OC(-1)[1]'")["sections"][0];
  CHECK(p["dims_unshifted"]["2"] == 4);
  CHECK(p["dims"]["1"] == 4);
  CHECK(p["agree"] == true);

  auto e = json_of("ext --scenario single:3 --pair E,E")["sections"][0];
  CHECK(e["dims"]["0"] == 2);
  CHECK(e["dims"]["1"] == 5);
  CHECK(e["dims"]["2"] == 4);
  CHECK(e["dims"]["3"] == 1);
  CHECK(e["agree"] == true);
}

TEST_CASE("ext table on the chain") {
  auto t = json_of("ext --scenario chain:3,3 --range=-3..3")["sections"][0];
  CHECK(t["cells"].size() == 49);
  CHECK(t["agree"] == true);
  for (const auto& c : t["cells"]) CHECK(c["basis"].size() == c["closed_form"].get<std::size_t>());
}

TEST_CASE("hull targets") {
  auto w = json_of("hull --scenario single:3 --target wall_point")["sections"][0]["points"][0];
  CHECK(w["stopping_check"]["verdict"] == "hull-equals-candidate");
  CHECK(w["invariant_ring"]["singularity"] == "1/3(1,1)");

  auto t = json_of("hull --scenario chain:3,3 --target triple_point")["sections"][0]["points"][0];
  CHECK(t["steps"][1]["J"] == "(q2 r) + m^3");
  CHECK(t["stopping_check"]["d"] == 4);
  CHECK(t["stopping_check"]["verdict"] == "hull-equals-candidate");

  auto c = json_of("hull --scenario single:3 --target chamber_point:generic")["sections"][0]["points"][0];
  CHECK(c["tangent_dimension"] == 2);
  CHECK(c["smooth"] == true);
}

TEST_CASE("json output is deterministic and carries the config hash") {
  for (const std::string args : {"report --scenario chain:3,3", "report --scenario single:3", "selftest"}) {
    auto a = run(args + " --format json --quiet"), b = run(args + " --format json --quiet");
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    auto doc = J::parse(a.out);
    for (const auto& s : doc["sections"]) CHECK(s["config_hash"] == doc["config_hash"]);
  }
  CHECK(json_of("walls --scenario single:3")["config_hash"] != json_of("walls --scenario single:4")["config_hash"]);
}

TEST_CASE("config file with flag overrides") {
  auto cfg = scratch() / "run.toml";
  write(cfg, "# hull settings\nscenario = \"chain:3,3\"\ntarget = \"triple_point\"\norder = 1\n");
  auto bad = run("hull --quiet --config " + cfg.string());
  CHECK(bad.code == 2);
  CHECK(bad.err.find("order") != std::string::npos);
  CHECK(bad.err.find("run.toml:4") != std::string::npos);

  auto doc = json_of("hull --config " + cfg.string() + " --order 3");
  CHECK(doc["config"]["scenario"] == "chain:3,3");
  CHECK(doc["config"]["order"] == 3);

  auto out = scratch() / "report.json";
  auto r = run("hull --quiet --format json --config " + cfg.string() + " --order 3 --out " + out.string());
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  CHECK(J::parse(slurp(out)) == doc);
}

TEST_CASE("exit codes") {
  CHECK(run("walls --scenario single:3 --quiet").code == 0);
  CHECK(run("walls --scenario wedge:3 --quiet").code == 2);
  CHECK(run("walls --quiet").code == 2);
  CHECK(run("walls --scenario single:3 --format yaml --quiet").code == 2);
  CHECK(run("hull --scenario single:3 --target nowhere --quiet").code == 2);
  CHECK(run("hull --scenario single:3 --target triple_point --quiet").code == 2);
  CHECK(run("invariants --scenario chain:3,3 --quiet").code == 2);
  CHECK(run("ext --scenario single:3 --pair 'OC,nonsense' --quiet").code == 2);
  CHECK(run("ext --scenario chain:3,3 --range 3..-3 --quiet").code == 2);
  CHECK(run("nosuchcommand").code == 2);

  auto w = run("ext --scenario single:3 --pair E,E --window-margin 0 --quiet");
  CHECK(w.code == 1);
  CHECK(w.err.find("window too small") != std::string::npos);
  CHECK(w.out.empty());
}

TEST_CASE("self-test with a fixed window is environment-limited") {
  auto r = run("selftest --window-margin 0 --format json --quiet");
  CHECK(r.code == 1);
  auto doc = J::parse(r.out);
  const auto& s = doc["sections"][0];
  CHECK(s["status"] == "environment-limited");
  int limited = 0;
  for (const auto& c : s["criteria"]) limited += c["status"] == "environment-limited";
  CHECK(limited > 0);
}

TEST_CASE("progress goes to stderr only") {
  auto r = run("ext --scenario single:3 --pair E,E");
  CHECK(r.code == 0);
  CHECK(r.err.find("weight") != std::string::npos);
  CHECK(r.out.find("[ext]") == std::string::npos);
}
