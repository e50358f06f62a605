#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "drrbfpu/cli.hpp"
#include "drrbfpu/geometry.hpp"
#include "drrbfpu/pum.hpp"

using namespace drrbfpu;

namespace {

std::string tmp(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(bool(in));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

TEST_CASE("flag errors exit with status 2") {
  CHECK(run_cli({"unknown-subcommand"}) == 2);
  CHECK(run_cli({"study"}) == 2);                                        // missing --function
  CHECK(run_cli({"study", "--function", "steep-front", "--bogus"}) == 2);
  CHECK(run_cli({"study", "--function", "nope"}) == 2);
  CHECK(run_cli({"study", "--function", "steep-front", "--n-ladder", "12"}) == 2);
  CHECK(run_cli({"study", "--function", "steep-front", "--overlap", "0.2"}) == 2);
}

TEST_CASE("help exits cleanly") {
  CHECK(run_cli({"--help"}) == 0);
}

TEST_CASE("single-rung study through the cli") {
  const std::string out = tmp("drrbfpu_cli_study.csv");
  CHECK(run_cli({"study", "--function", "steep-front", "--n-ladder", "1089", "--n-patches",
                 "64", "--eval-grid", "40", "--out", out}) == 0);
  const auto lines = read_lines(out);
  REQUIRE(lines.size() == 3);
  const auto fields = split(lines[2], ',');
  REQUIRE(fields.size() == 11);
  CHECK(fields[0] == "1089");
  CHECK(fields[6].empty());  // no order on the first rung
  CHECK(fields[8].empty());
  std::filesystem::remove(out);
}

TEST_CASE("fit then eval reproduces in-process evaluation") {
  const std::string points_path = tmp("drrbfpu_cli_points.csv");
  const std::string eval_path = tmp("drrbfpu_cli_evalpts.csv");
  const std::string model_path = tmp("drrbfpu_cli_model.txt");
  const std::string out_path = tmp("drrbfpu_cli_values.csv");

  write_points_csv(points_path, build_uniform_grid(15));
  write_points_csv(eval_path, halton_points(25));

  CHECK(run_cli({"fit", "--points", points_path, "--function", "steep-front", "--n-patches",
                 "4", "--shape-c", "12", "--mdi-mu", "1e-9", "--out", model_path}) == 0);
  CHECK(run_cli({"eval", "--model", model_path, "--points", eval_path, "--deriv", "x", "--out",
                 out_path}) == 0);

  const GlobalModel model = load_model(model_path);
  const PointSet eval_points = read_points_csv(eval_path);
  const auto lines = read_lines(out_path);
  REQUIRE(lines.size() == std::size_t(1 + eval_points.size()));
  CHECK(lines[0] == "x,y,value");
  for (int i = 0; i < eval_points.size(); ++i) {
    const auto fields = split(lines[std::size_t(i + 1)], ',');
    REQUIRE(fields.size() == 3);
    const double got = std::stod(fields[2]);
    const double want = eval_global(model, eval_points.point(i), Deriv::dx);
    CHECK(std::abs(got - want) <= 1e-14 * std::max(1.0, std::abs(want)));
  }

  for (const auto& p : {points_path, eval_path, model_path, out_path})
    std::filesystem::remove(p);
}

TEST_CASE("eval rejects a missing model file") {
  CHECK(run_cli({"eval", "--model", tmp("drrbfpu_no_such_model.txt"), "--points",
                 tmp("drrbfpu_no_such_points.csv")}) == 1);
}

TEST_CASE("surface dump through the cli") {
  const std::string out = tmp("drrbfpu_cli_surface.csv");
  CHECK(run_cli({"dump-surface", "--function", "steep-front", "--n", "289", "--n-patches", "64",
                 "--eval-grid", "15", "--out", out}) == 0);
  const auto lines = read_lines(out);
  REQUIRE(lines.size() == std::size_t(1 + 15 * 15));
  CHECK(lines[0] == "x,y,approx,exact,abs_err");
  std::filesystem::remove(out);
}

TEST_CASE("verify reports a clean bound check") {
  CHECK(run_cli({"verify", "--function", "steep-front", "--n", "289", "--n-patches", "16",
                 "--eval-grid", "40"}) == 0);
}
