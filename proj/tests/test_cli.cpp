#include <doctest.h>

#include <nlohmann/json.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(MOMCERT_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("momcert_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string file(const std::string& name) { return (scratch() / name).string(); }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("gen writes moment files") {
  REQUIRE(run("gen --atoms \"(-1:3/4),(1/2:1/4)\" --degree 64 -o " + file("two.json")).code == 0);
  const auto j = json::parse(slurp(file("two.json")));
  CHECK(j["moments"].size() == 65);
  CHECK(j["moments"][2]["value"] == "13/16");
  CHECK(j["provenance"] == "atomic");

  const auto u = run("gen --family uniform01 --degree 32");
  REQUIRE(u.code == 0);
  const auto ju = json::parse(u.out);
  for (const auto& m : ju["moments"]) {
    const unsigned k = m["exp"][0];
    CHECK(m["value"] == "1/" + std::to_string(k + 1));
  }
  const auto z = json::parse(run("gen --atoms \"(0:1)\" --degree 8").out);
  for (std::size_t k = 1; k < z["moments"].size(); ++k) CHECK(z["moments"][k]["value"] == "0/1");

  CHECK(run("gen --atoms \"(0:1/2)\" --degree 8").code == 2);
  CHECK(run("gen --family cauchy --degree 8").code == 2);
  CHECK(run("gen --degree 8").code == 2);
}

TEST_CASE("check batteries") {
  REQUIRE(run("gen --atoms \"(-1:3/4),(1/2:1/4)\" --degree 16 -o " + file("c.json")).code == 0);
  const auto ok = run("check " + file("c.json"));
  CHECK(ok.code == 0);
  CHECK(json::parse(ok.out)["pass"] == true);

  std::ofstream(file("bad.json"))
      << R"({"num_vars":1,"max_degree":2,"moments":[{"exp":[0],"value":"1"},)"
      << R"({"exp":[1],"value":"0"},{"exp":[2],"value":"-1"}],"provenance":"file"})";
  const auto bad = run("check " + file("bad.json"));
  CHECK(bad.code == 1);
  CHECK(bad.out.find("positivity violation") != std::string::npos);

  REQUIRE(run("gen --family gaussian --degree 64 -o " + file("g.json")).code == 0);
  const auto g = run("check " + file("g.json"));
  const auto jg = json::parse(g.out);
  CHECK(jg["positivity"]["pass"] == true);
  CHECK(jg["growth_summary"][0]["verdict"] == "Diverging");
}

TEST_CASE("analysis subcommands and exit codes") {
  REQUIRE(run("gen --atoms \"(-1:3/4),(1/2:1/4)\" --degree 128 -o " + file("a.json")).code == 0);
  REQUIRE(run("gen --family gaussian --degree 64 -o " + file("g.json")).code == 0);
  REQUIRE(run("gen --family uniform01 --degree 64 -o " + file("u.json")).code == 0);

  const auto box = json::parse(run("box " + file("a.json")).out);
  CHECK(box["intervals"][0][1].get<double>() == doctest::Approx(1.05).epsilon(0.01));
  CHECK(run("box " + file("g.json")).code == 3);

  const auto growth = run("growth " + file("a.json") + " --poly X --format csv");
  CHECK(growth.code == 0);
  CHECK(growth.out.find("index,value\n1,") != std::string::npos);

  const auto mass = json::parse(run("mass " + file("a.json") + " --alpha -1 --d 2").out);
  CHECK(mass["value"].get<double>() == doctest::Approx(0.75).epsilon(0.05));
  CHECK(run("mass " + file("a.json") + " --alpha 0 --d 6").code == 4);
  CHECK(run("mass " + file("a.json") + " --alpha 0,0").code == 2);

  const auto fin = json::parse(run("finite " + file("a.json") + " --d 2").out);
  CHECK(fin["verdict"]["Finite"] == 2);

  const auto rec = json::parse(run("recover " + file("a.json")).out);
  CHECK(rec["atoms"].size() == 2);
  CHECK(run("recover " + file("u.json")).code == 3);

  CHECK(run("box " + file("missing.json")).code == 2);
  CHECK(run("frobnicate").code == 2);
}

TEST_CASE("stdin piping and determinism") {
  const auto piped = run("gen --atoms \"(1/3:1)\" --degree 16 | " + std::string(MOMCERT_CLI) + " box -");
  CHECK(piped.code == 0);
  CHECK(json::parse(piped.out)["radius"][0].get<double>() == doctest::Approx(1.0 / 3));

  REQUIRE(run("gen --atoms \"(-1:3/4),(1/2:1/4)\" --degree 32 -o " + file("r.json")).code == 0);
  const auto first = run("report " + file("r.json") + " --seed 3");
  const auto second = run("report " + file("r.json") + " --seed 3");
  CHECK(first.code == 0);
  CHECK(first.out == second.out);
  const auto report = json::parse(first.out);
  for (const char* key : {"checks", "growth", "box", "ql_certificates", "recovery", "finite"}) {
    CHECK(report.contains(key));
  }
}
