#include <doctest.h>

#include <filesystem>
#include <nlohmann/json.hpp>
#include <sstream>

#include "cli.hpp"
#include "trafficsym/io.hpp"

using trafficsym::cli::run_cli;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("trafficsym-test-" + name);
  fs::remove_all(p);
  return p;
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("lie queries print the documented JSON") {
  CHECK(call({"lie", "commutator", "0,1,0,0", "1,0,0,0"}).out == "{\"result\":[0,1,0,0]}\n");
  CHECK(call({"lie", "killing", "1,2,3,4"}).out == "{\"K\":2}\n");
  const auto j = nlohmann::json::parse(call({"lie", "classify", "0,0,1,-0.7"}).out);
  CHECK(j["family"] == "T1");
  CHECK(j["b"] == -1);
  CHECK(j.contains("eps"));
  CHECK(call({"lie", "commutator", "1,2,3", "1,0,0,0"}).code == 64);
}

TEST_CASE("verify exit codes") {
  CHECK(call({"verify", "T1?p1=1&p2=2&b=1", "--A", "1", "--D", "0.5"}).code == 0);
  const Result kink = call({"verify", "KINK?mshape=gauss&c1=1", "--A", "1"});
  CHECK((kink.code == 2 || kink.code == 3));
  CHECK(kink.out.find("max_r1") != std::string::npos);
  const Result missing = call({"verify", "T1?p1=1"});
  CHECK(missing.code == 64);
  CHECK(missing.err.find("p2") != std::string::npos);
  CHECK(missing.err.find("b") != std::string::npos);
  CHECK(call({"verify", "T1?p1=x&p2=2&b=1"}).code == 65);
  CHECK(call({"verify", "T3?p1=1&b=1", "--A", "0"}).code == 65);
  CHECK(call({"verify", "CONTROL"}).code == 2);
  CHECK(call({}).code == 64);
  CHECK(call({"--help"}).code == 0);
}

TEST_CASE("simulate a constant state") {
  const fs::path dir = scratch("const");
  const Result r = call({"simulate", "--ic", "T4?p1=1&b=0", "--nx", "20", "--x", "0:1", "--t0", "0",
                         "--t-end", "0.1", "--bc", "periodic", "--out", dir.string()});
  REQUIRE(r.code == 0);
  const std::string csv = trafficsym::io::read_file((dir / "trajectory.csv").string());
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,x,rho,u");
  while (std::getline(in, line)) {
    CHECK(line.substr(line.size() - 4) == ",1,1");
  }
  CHECK(fs::exists(dir / "diagnostics.json"));
  CHECK(fs::exists(dir / "manifest.json"));
  fs::remove_all(dir);
}

TEST_CASE("simulate surface mode for the first figure") {
  const Result r = call({"simulate", "--ic", "T1?p1=1&p2=2&b=1", "--surface", "x:-5:5:101",
                         "t:0.5:3:101"});
  REQUIRE(r.code == 0);
  CHECK(lines(r.out) == 101u * 101u + 1u);
  CHECK(r.out.rfind("x,t,rho,u\n", 0) == 0);
}

TEST_CASE("simulate positivity abort exits 4") {
  const fs::path dir = scratch("pos");
  fs::create_directories(dir);
  std::string csv = "x,rho,u\n";
  for (int i = 0; i < 20; ++i) {
    csv += std::to_string(0.025 + 0.05 * i) + (i == 12 ? ",0,1\n" : ",1,1\n");
  }
  trafficsym::io::write_file((dir / "ic.csv").string(), csv);
  const Result r = call({"simulate", "--ic", (dir / "ic.csv").string(), "--t-end", "1"});
  CHECK(r.code == 4);
  CHECK(r.err.find("cell 12") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("wavefront summaries") {
  const std::string bg = "T1?p1=0&p2=1&b=1";
  auto shock = nlohmann::json::parse(call({"wavefront", "--background", bg, "--A", "1", "--x0", "1",
                                           "--pi0", "-1.5"})
                                         .out);
  CHECK(shock["shock_time"].get<double>() == doctest::Approx(2.1748021039363992).epsilon(1e-7));
  CHECK(shock["regime"] == "supercritical-shock");
  auto decay = nlohmann::json::parse(
      call({"wavefront", "--background", bg, "--A", "1", "--x0", "1", "--pi0", "0.5"}).out);
  CHECK(decay["shock_time"].is_null());
  CHECK(decay["pi_c"].get<double>() == doctest::Approx(0.75));
  CHECK(call({"wavefront", "--background", "CONTROL"}).code == 5);

  const fs::path dir = scratch("wave0");
  REQUIRE(call({"wavefront", "--background", bg, "--x0", "1", "--pi0", "0", "--out",
                dir.string()})
              .code == 0);
  const std::string trace = trafficsym::io::read_file((dir / "trace.csv").string());
  std::istringstream in(trace);
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,x,psi,E,F,pi");
  while (std::getline(in, line)) CHECK(line.substr(line.rfind(',') + 1) == "0");
  fs::remove_all(dir);
}

TEST_CASE("conserve emits the divergence table") {
  const Result r = call({"conserve", "--entry", "T1?p1=1&p2=2&b=1", "--which", "S4", "--c",
                         "0,0,1", "--x", "0:1:3", "--t", "1:2:2"});
  REQUIRE(r.code == 0);
  CHECK(lines(r.out) == 7u);
  CHECK(call({"conserve", "--entry", "T1?p1=1&p2=2&b=1", "--which", "S9"}).code == 64);
}

TEST_CASE("catalog list covers every default entry") {
  const auto arr = nlohmann::json::parse(call({"catalog", "list"}).out);
  CHECK(arr.size() == 11u);
  for (const auto& e : arr) CHECK(e.contains("status"));
}

TEST_CASE("manifests replay to identical digests") {
  const fs::path dir = scratch("replay");
  const Result first = call({"verify", "T3?p1=2&b=1", "--out", dir.string()});
  REQUIRE(first.code == 0);
  const auto m = nlohmann::json::parse(trafficsym::io::read_file((dir / "manifest.json").string()));
  CHECK(m["command"] == "verify");
  CHECK(m["outputs"].contains("report.json"));
  CHECK(m["stdout_sha256"] == trafficsym::io::sha256_hex(first.out));
  CHECK(call({"replay", (dir / "manifest.json").string()}).code == 0);

  // Tampered digest is reported as a mismatch.
  auto bad = m;
  bad["outputs"]["report.json"] = std::string(64, '0');
  trafficsym::io::write_file((dir / "bad.json").string(), bad.dump());
  CHECK(call({"replay", (dir / "bad.json").string()}).code == 1);
  fs::remove_all(dir);
}

TEST_CASE("global manifest option") {
  const fs::path dir = scratch("global");
  const std::string path = (dir / "m.json").string();
  REQUIRE(call({"lie", "killing", "1,0,0,0", "--manifest", path}).code == 0);
  CHECK(call({"replay", path}).code == 0);
  fs::remove_all(dir);
}
