#include <catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "helpers.hpp"

using nlohmann::json;
using test_helpers::cli;
using test_helpers::fixture_path;
using test_helpers::run_command;

namespace {

std::string tmp_file(const std::string& name) { return "/tmp/cellplace_test_" + name; }

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out);
  out << content;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json strip_wall_ms(const std::string& text) {
  json j = json::parse(text);
  j.erase("wall_ms");
  return j;
}

const std::string kWorked2x2 =
    "N 2\nW 0.5\nFLOW\n0 4\n0 0\nCLOSENESS LETTERS\n- U\n- -\nDISTANCE\n0 3\n3 0\n";

}  // namespace

TEST_CASE("solve smoke and --w override") {
  auto r = run_command(cli() + " solve " + fixture_path("table1_6x6.inst") + " --out json");
  REQUIRE(r.exit_code == 0);
  json j = json::parse(r.output);
  CHECK(j["n"] == 6);
  CHECK(j["w"] == 0.5);
  CHECK(j["solver"] == "sa");

  auto r2 = run_command(cli() + " solve " + fixture_path("table1_6x6.inst") +
                        " --w 0.4 --out json");
  REQUIRE(r2.exit_code == 0);
  CHECK(json::parse(r2.output)["w"] == 0.4);
}

TEST_CASE("solve is deterministic apart from wall_ms") {
  const std::string cmd =
      cli() + " solve " + fixture_path("table1_6x6.inst") + " --seed 3 --out json";
  auto a = run_command(cmd);
  auto b = run_command(cmd);
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  CHECK(strip_wall_ms(a.output) == strip_wall_ms(b.output));
}

TEST_CASE("solve --trace writes a convergence CSV") {
  const std::string trace = tmp_file("trace.csv");
  auto r = run_command(cli() + " solve " + fixture_path("table1_6x6.inst") + " --trace " + trace);
  REQUIRE(r.exit_code == 0);
  const std::string content = slurp(trace);
  CHECK(content.rfind("stage,temperature,incumbent_total\n", 0) == 0);
  CHECK(content.size() > 40);
  std::remove(trace.c_str());
}

TEST_CASE("exact matches or lower-bounds solve") {
  auto exact = run_command(cli() + " exact " + fixture_path("table1_6x6.inst") + " --out json");
  auto solve = run_command(cli() + " solve " + fixture_path("table1_6x6.inst") + " --out json");
  REQUIRE(exact.exit_code == 0);
  REQUIRE(solve.exit_code == 0);
  const double exact_total = json::parse(exact.output)["total"];
  const double sa_total = json::parse(solve.output)["total"];
  CHECK(sa_total >= exact_total - 1e-9);
}

TEST_CASE("exact refuses n > 10 without --force") {
  const std::string path = tmp_file("n12.inst");
  REQUIRE(run_command(cli() + " gen --n 12 --seed 1 --out-path " + path).exit_code == 0);
  CHECK(run_command(cli() + " exact " + path).exit_code == 1);
  std::remove(path.c_str());
}

TEST_CASE("eval prints the worked-example breakdown") {
  const std::string path = tmp_file("worked.inst");
  write_file(path, kWorked2x2);
  auto r = run_command(cli() + " eval " + path + " --perm 0,1");
  REQUIRE(r.exit_code == 0);
  CHECK(r.output.find("total:           4.5") != std::string::npos);

  CHECK(run_command(cli() + " eval " + path + " --perm 0,0").exit_code == 1);
  CHECK(run_command(cli() + " eval " + path + " --perm 0").exit_code == 1);
  CHECK(run_command(cli() + " eval " + path + " --perm 0,1,2").exit_code == 1);
  std::remove(path.c_str());
}

TEST_CASE("gen round-trips and is byte-reproducible") {
  const std::string a = tmp_file("gen_a.inst"), b = tmp_file("gen_b.inst");
  REQUIRE(run_command(cli() + " gen --n 6 --seed 9 --out-path " + a).exit_code == 0);
  REQUIRE(run_command(cli() + " gen --n 6 --seed 9 --out-path " + b).exit_code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(run_command(cli() + " validate " + a).exit_code == 0);
  CHECK(run_command(cli() + " gen --n 1 --out-path " + a).exit_code == 1);
  std::remove(a.c_str());
  std::remove(b.c_str());
}

TEST_CASE("validate exit codes") {
  auto ok = run_command(cli() + " validate " + fixture_path("table1_6x6.inst"));
  CHECK(ok.exit_code == 0);
  CHECK(ok.output == "OK\n");

  // parses fine but breaks the distance symmetry invariant
  const std::string broken = tmp_file("asym.inst");
  write_file(broken,
             "N 2\nW 0.5\nFLOW\n0 4\n0 0\nCLOSENESS LETTERS\n- U\n- -\nDISTANCE\n0 3\n5 0\n");
  auto bad = run_command(cli() + " validate " + broken);
  CHECK(bad.exit_code == 3);
  CHECK(bad.output.find("(0,1)") != std::string::npos);
  std::remove(broken.c_str());

  const std::string truncated = tmp_file("nodist.inst");
  write_file(truncated, "N 2\nW 0.5\nFLOW\n0 4\n0 0\nCLOSENESS LETTERS\n- U\n- -\n");
  CHECK(run_command(cli() + " validate " + truncated).exit_code == 2);
  std::remove(truncated.c_str());

  CHECK(run_command(cli() + " validate /nonexistent/file.inst").exit_code == 2);
}

TEST_CASE("sweep emits one CSV row per w") {
  auto r = run_command(cli() + " sweep " + fixture_path("table1_6x6.inst") +
                       " --w 0.2,0.4,0.6,0.8 --solver exact");
  REQUIRE(r.exit_code == 0);

  std::istringstream lines(r.output);
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line == "instance,n,w,solver,seed,total,flow_term,closeness_term,perm,evaluations,wall_ms");
  int rows = 0;
  double prev_w = -1.0;
  while (std::getline(lines, line)) {
    ++rows;
    std::istringstream fields(line);
    std::string instance, n, w, solver, seed, total, flow, clo;
    std::getline(fields, instance, ',');
    std::getline(fields, n, ',');
    std::getline(fields, w, ',');
    std::getline(fields, solver, ',');
    std::getline(fields, seed, ',');
    std::getline(fields, total, ',');
    std::getline(fields, flow, ',');
    std::getline(fields, clo, ',');
    CHECK(instance == "table1_6x6");
    CHECK(solver == "exact");
    const double wv = std::stod(w);
    CHECK(wv > prev_w);  // input order preserved
    prev_w = wv;
    CHECK_THAT(std::stod(total),
               Catch::Matchers::WithinAbs(std::stod(flow) + wv * std::stod(clo), 1e-9));
  }
  CHECK(rows == 4);

  CHECK(run_command(cli() + " sweep " + fixture_path("table1_6x6.inst") + " --w 0.2,1.5")
            .exit_code == 1);
}

TEST_CASE("usage errors exit 1, parse errors exit 2") {
  CHECK(run_command(cli() + " solve " + fixture_path("table1_6x6.inst") + " --w 2.0")
            .exit_code == 1);
  CHECK(run_command(cli() + " solve /nonexistent/file.inst").exit_code == 2);

  const std::string badw = tmp_file("badw.inst");
  write_file(badw, "N 2\nW 1.5\nFLOW\n0 4\n0 0\nCLOSENESS LETTERS\n- U\n- -\nDISTANCE\n0 3\n3 0\n");
  CHECK(run_command(cli() + " solve " + badw).exit_code == 2);
  std::remove(badw.c_str());
}
