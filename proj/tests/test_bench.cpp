#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "drrbfpu/bench.hpp"

using namespace drrbfpu;

TEST_CASE("steep-front values") {
  CHECK(test1_value(0.0, 0.0) == doctest::Approx(1.5574791105242551).epsilon(1e-15));
  // on the circle where the front sits, the arctan argument vanishes
  CHECK(std::abs(test1_value(0.58, 0.25)) <= 1e-12);
}

TEST_CASE("steep-front derivatives match finite differences") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double h = 1e-6;
  for (int k = 0; k < 1000; ++k) {
    const double x = u(rng), y = u(rng);
    const double fx = (test1_value(x + h, y) - test1_value(x - h, y)) / (2 * h);
    const double fy = (test1_value(x, y + h) - test1_value(x, y - h)) / (2 * h);
    CHECK(std::abs(test1_dx(x, y) - fx) / std::max(1.0, std::abs(test1_dx(x, y))) <= 1e-6);
    CHECK(std::abs(test1_dy(x, y) - fy) / std::max(1.0, std::abs(test1_dy(x, y))) <= 1e-6);
  }
}

TEST_CASE("tan-lines values") {
  // along y = x the argument is 1
  CHECK(test2_value(0.3, 0.3) == doctest::Approx(2.8436228851597618).epsilon(1e-14));
  CHECK(test2_value(0.0, 0.0) == test2_value(0.9, 0.9));
}

TEST_CASE("tan-lines derivatives are opposite and match finite differences") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const TestFunction fn = TestFunction::tan_lines();
  const double h = 1e-6;
  int checked = 0;
  while (checked < 1000) {
    const double x = u(rng), y = u(rng);
    if (fn.singular_distance(x, y) < 1e-3) continue;  // exclusion band
    ++checked;
    CHECK(test2_dx(x, y) + test2_dy(x, y) == 0.0);
    const double fx = (test2_value(x + h, y) - test2_value(x - h, y)) / (2 * h);
    CHECK(std::abs(test2_dx(x, y) - fx) / std::max(1.0, std::abs(test2_dx(x, y))) <= 1e-6);
  }
}

TEST_CASE("tan-lines singularities are rejected and nudged off") {
  const TestFunction fn = TestFunction::tan_lines();
  // y - x on the k = 5 singular line
  const double kPi = 3.14159265358979323846;
  const double line = (kPi / 2.0 - 1.0) / 9.0;
  const double x = 0.3, y = x + line;
  CHECK(fn.singular_distance(x, y) < 1e-12);
  CHECK_THROWS_AS(test2_value(x, y), SingularPointError);
  CHECK_THROWS_AS(test2_dx(x, y), SingularPointError);

  const Point moved = fn.adjust(Point(x, y));
  CHECK(moved.x() > x);
  CHECK(moved.x() <= x + 1e-7);
  CHECK(fn.singular_distance(moved.x(), moved.y()) >= 1e-10);
  CHECK(std::isfinite(test2_value(moved.x(), moved.y())));

  // steep-front never adjusts
  CHECK(TestFunction::steep_front().adjust(Point(x, y)) == Point(x, y));
}

TEST_CASE("test function registry") {
  CHECK(TestFunction::from_name("steep-front").id() == TestFunction::Id::steep_front);
  CHECK(TestFunction::from_name("tan-lines").id() == TestFunction::Id::tan_lines);
  CHECK_THROWS_AS(TestFunction::from_name("nope"), std::invalid_argument);
}

TEST_CASE("relative l2 error") {
  Eigen::VectorXd e(3);
  e << 1.0, -2.0, 2.0;
  CHECK(relative_l2_error(e, e) == 0.0);
  CHECK(relative_l2_error(2.0 * e, e) == doctest::Approx(1.0).epsilon(1e-15));

  Eigen::VectorXd a(3);
  a << 1.1, -1.8, 2.3;
  const double base = relative_l2_error(a, e);
  for (double s : {5.0, -0.125}) {
    CHECK(relative_l2_error((s * a).eval(), (s * e).eval()) ==
          doctest::Approx(base).epsilon(1e-14));
  }

  CHECK_THROWS_AS(relative_l2_error(a, Eigen::VectorXd::Zero(3)), MetricError);
  CHECK_THROWS_AS(relative_l2_error(a, Eigen::VectorXd::Ones(2)), std::invalid_argument);
}

TEST_CASE("convergence order") {
  CHECK(convergence_order(2.74e-1, 8.66e-2) == doctest::Approx(1.66).epsilon(0.01));
  CHECK(convergence_order(4.43e-3, 2.71e-4) == doctest::Approx(4.03).epsilon(0.01));
  CHECK(convergence_order(0.5, 0.25) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(convergence_order(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(convergence_order(1.0, -1.0), std::invalid_argument);
}

TEST_CASE("study config validation") {
  StudyConfig config;
  CHECK_NOTHROW(config.validate());

  StudyConfig bad = config;
  bad.n_ladder = {100, 99};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.n_ladder = {12};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.n_ladder = {};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = config;
  bad.n_patches = 10;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = config;
  bad.overlap = 0.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = config;
  bad.mu = -1e-9;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

namespace {

StudyConfig small_study() {
  StudyConfig config;
  config.function = TestFunction::Id::steep_front;
  config.n_ladder = {1089};
  config.n_patches = 64;
  config.eval_grid = 50;
  return config;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(bool(in));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

// strips the two timing columns
std::string non_timing_part(const std::string& csv_row) {
  auto pos = csv_row.size();
  for (int cut = 0; cut < 2; ++cut) pos = csv_row.rfind(',', pos - 1);
  return csv_row.substr(0, pos);
}

}  // namespace

TEST_CASE("single-rung study produces one row without orders") {
  const auto rows = run_convergence_study(small_study());
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].n == 1089);
  CHECK_FALSE(rows[0].has_orders);
  CHECK(rows[0].e0 > 0.0);
  CHECK(rows[0].e0 < 0.5);
  CHECK(rows[0].e1 > 0.0);
}

TEST_CASE("two-rung study computes orders and writes well-formed csv") {
  StudyConfig config = small_study();
  config.n_ladder = {289, 1089};
  const auto rows = run_convergence_study(config);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].has_orders);
  CHECK(rows[1].order0 == doctest::Approx(convergence_order(rows[0].e0, rows[1].e0)));

  const std::string path =
      (std::filesystem::temp_directory_path() / "drrbfpu_study_test.csv").string();
  write_study_csv(path, config, rows);
  const auto lines = read_lines(path);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0].rfind("# drrbfpu study function=steep-front", 0) == 0);
  CHECK(lines[0].find("boundaries=included") != std::string::npos);
  CHECK(lines[1] == "N,Nc,c,overlap,mu,e0,order0,e1,order1,fit_seconds,eval_seconds");
  CHECK(lines[2].rfind("289,64,", 0) == 0);
  // first rung carries empty order fields
  std::stringstream row(lines[2]);
  std::vector<std::string> fields;
  std::string field;
  while (std::getline(row, field, ',')) fields.push_back(field);
  REQUIRE(fields.size() == 11);
  CHECK(fields[6].empty());
  CHECK(fields[8].empty());
  std::filesystem::remove(path);
}

TEST_CASE("studies are deterministic apart from timings") {
  const StudyConfig config = small_study();
  const std::string p1 =
      (std::filesystem::temp_directory_path() / "drrbfpu_det_1.csv").string();
  const std::string p2 =
      (std::filesystem::temp_directory_path() / "drrbfpu_det_2.csv").string();
  write_study_csv(p1, config, run_convergence_study(config));
  write_study_csv(p2, config, run_convergence_study(config));
  const auto a = read_lines(p1), b = read_lines(p2);
  REQUIRE(a.size() == b.size());
  CHECK(a[0] == b[0]);
  CHECK(a[1] == b[1]);
  for (std::size_t i = 2; i < a.size(); ++i) CHECK(non_timing_part(a[i]) == non_timing_part(b[i]));
  std::filesystem::remove(p1);
  std::filesystem::remove(p2);
}

TEST_CASE("surface dump covers the evaluation grid") {
  StudyConfig config = small_study();
  config.eval_grid = 20;
  const std::string path =
      (std::filesystem::temp_directory_path() / "drrbfpu_surface_test.csv").string();
  dump_surface_csv(path, config, 289, Deriv::dx);
  const auto lines = read_lines(path);
  REQUIRE(lines.size() == std::size_t(1 + 20 * 20));
  CHECK(lines[0] == "x,y,approx,exact,abs_err");
  std::stringstream row(lines[1]);
  std::vector<std::string> fields;
  std::string field;
  while (std::getline(row, field, ',')) fields.push_back(field);
  REQUIRE(fields.size() == 5);
  const double approx = std::stod(fields[2]), exact = std::stod(fields[3]),
               err = std::stod(fields[4]);
  CHECK(err == std::abs(approx - exact));
  std::filesystem::remove(path);
}
