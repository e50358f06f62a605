#include "drrbfpu/bench.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "parallel.hpp"

namespace drrbfpu {

namespace {

constexpr double kPi = 3.14159265358979323846;

// tan(9) to double precision; the denominator tan(9) + 1 of test 2
const double kTan9 = std::tan(9.0);

// distance of 9(y-x)+1 from the nearest odd multiple of pi/2 (argument units)
double tan_argument_distance(double x, double y) {
  const double u = 9.0 * (y - x) + 1.0;
  const double k = std::round((u - kPi / 2.0) / kPi);
  return std::abs(u - (kPi / 2.0 + k * kPi));
}

}  // namespace

double test1_value(double x, double y) {
  const double s = std::sqrt((x - 1.5) * (x - 1.5) + (y - 0.25) * (y - 0.25));
  return std::atan(125.0 * (s - 0.92));
}

double test1_dx(double x, double y) {
  const double s = std::sqrt((x - 1.5) * (x - 1.5) + (y - 0.25) * (y - 0.25));
  const double t = 125.0 * (s - 0.92);
  return 125.0 * (x - 1.5) / (s * (1.0 + t * t));
}

double test1_dy(double x, double y) {
  const double s = std::sqrt((x - 1.5) * (x - 1.5) + (y - 0.25) * (y - 0.25));
  const double t = 125.0 * (s - 0.92);
  return 125.0 * (y - 0.25) / (s * (1.0 + t * t));
}

namespace {

void reject_singular(double x, double y) {
  // geometric distance to the lines y = x + const is the argument distance
  // divided by 9 sqrt(2)
  if (tan_argument_distance(x, y) < 1e-12 * 9.0 * std::sqrt(2.0))
    throw SingularPointError("evaluation on a singular line at (" + std::to_string(x) + ", " +
                             std::to_string(y) + ")");
}

}  // namespace

double test2_value(double x, double y) {
  reject_singular(x, y);
  return std::tan(9.0 * (y - x) + 1.0) / (kTan9 + 1.0);
}

double test2_dx(double x, double y) {
  reject_singular(x, y);
  const double c = std::cos(9.0 * (y - x) + 1.0);
  return -9.0 / (c * c * (kTan9 + 1.0));
}

double test2_dy(double x, double y) {
  reject_singular(x, y);
  const double c = std::cos(9.0 * (y - x) + 1.0);
  return 9.0 / (c * c * (kTan9 + 1.0));
}

TestFunction TestFunction::steep_front() { return TestFunction(Id::steep_front, "steep-front"); }
TestFunction TestFunction::tan_lines() { return TestFunction(Id::tan_lines, "tan-lines"); }

TestFunction TestFunction::from_name(const std::string& name) {
  if (name == "steep-front") return steep_front();
  if (name == "tan-lines") return tan_lines();
  throw std::invalid_argument("unknown test function '" + name +
                              "' (expected steep-front or tan-lines)");
}

double TestFunction::value(double x, double y) const {
  return id_ == Id::steep_front ? test1_value(x, y) : test2_value(x, y);
}

double TestFunction::dx(double x, double y) const {
  return id_ == Id::steep_front ? test1_dx(x, y) : test2_dx(x, y);
}

double TestFunction::dy(double x, double y) const {
  return id_ == Id::steep_front ? test1_dy(x, y) : test2_dy(x, y);
}

double TestFunction::deriv(double x, double y, Axis axis) const {
  return axis == Axis::x ? dx(x, y) : dy(x, y);
}

double TestFunction::singular_distance(double x, double y) const {
  if (id_ == Id::steep_front) return std::numeric_limits<double>::infinity();
  return tan_argument_distance(x, y) / (9.0 * std::sqrt(2.0));
}

Point TestFunction::adjust(const Point& p) const {
  if (id_ == Id::steep_front) return p;
  Point q = p;
  while (singular_distance(q.x(), q.y()) < 1e-10) q.x() += 1e-8;
  return q;
}

double relative_l2_error(const Eigen::VectorXd& approx, const Eigen::VectorXd& exact) {
  if (approx.size() != exact.size())
    throw std::invalid_argument("relative_l2_error: length mismatch");
  const double denom = exact.norm();
  if (!(denom > 0.0)) throw MetricError("relative_l2_error: zero reference norm");
  return (exact - approx).norm() / denom;
}

double convergence_order(double e_prev, double e_curr) {
  if (!(e_prev > 0.0) || !(e_curr > 0.0))
    throw std::invalid_argument("convergence_order: errors must be positive");
  return std::log2(e_prev / e_curr);
}

void StudyConfig::validate() const {
  if (n_ladder.empty()) throw std::invalid_argument("StudyConfig: empty node ladder");
  long prev = 0;
  for (long n : n_ladder) {
    if (n <= prev) throw std::invalid_argument("StudyConfig: node ladder must be strictly increasing");
    const long side = std::lround(std::sqrt(double(n)));
    if (side < 2 || side * side != n)
      throw std::invalid_argument("StudyConfig: ladder entry " + std::to_string(n) +
                                  " is not a square of an integer >= 2");
    prev = n;
  }
  const long m = std::lround(std::sqrt(double(n_patches)));
  if (m < 2 || m * m != n_patches)
    throw std::invalid_argument("StudyConfig: n_patches must be a square of an integer >= 2");
  if (!(shape_c > 0.0)) throw std::invalid_argument("StudyConfig: shape_c must be positive");
  if (!(overlap >= 1.0 / std::sqrt(2.0)))
    throw std::invalid_argument("StudyConfig: overlap must be >= 1/sqrt(2)");
  if (!(mu >= 0.0)) throw std::invalid_argument("StudyConfig: mu must be nonnegative");
  if (eval_grid < 2) throw std::invalid_argument("StudyConfig: eval_grid must be >= 2");
}

namespace {

PointSet adjusted_grid(int side, const TestFunction& fn) {
  PointSet grid = build_uniform_grid(side);
  for (int i = 0; i < grid.size(); ++i) grid.coords.col(i) = fn.adjust(grid.point(i));
  return grid;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::vector<ConvergenceRow> run_convergence_study(const StudyConfig& config) {
  config.validate();
  const TestFunction fn = config.function == TestFunction::Id::steep_front
                              ? TestFunction::steep_front()
                              : TestFunction::tan_lines();
  const PatchCover cover = build_patch_cover(config.n_patches, config.overlap);

  FitConfig fit_config{ShapeParameter(config.shape_c)};
  fit_config.mu = config.mu;

  const PointSet eval_points = adjusted_grid(config.eval_grid, fn);
  const int n_eval = eval_points.size();
  Eigen::VectorXd exact0(n_eval), exact1(n_eval);
  for (int i = 0; i < n_eval; ++i) {
    exact0(i) = fn.value(eval_points.point(i).x(), eval_points.point(i).y());
    exact1(i) = fn.deriv(eval_points.point(i).x(), eval_points.point(i).y(), config.axis);
  }
  const Deriv deriv = config.axis == Axis::x ? Deriv::dx : Deriv::dy;

  std::vector<ConvergenceRow> rows;
  for (long n : config.n_ladder) {
    const int side = int(std::lround(std::sqrt(double(n))));

    auto t_fit = std::chrono::steady_clock::now();
    const PointSet nodes = adjusted_grid(side, fn);
    Eigen::VectorXd values(nodes.size());
    for (int i = 0; i < nodes.size(); ++i)
      values(i) = fn.value(nodes.point(i).x(), nodes.point(i).y());
    const GlobalModel model = fit_global(nodes, values, cover, fit_config);

    ConvergenceRow row;
    row.n = n;
    row.fit_seconds = seconds_since(t_fit);

    auto t_eval = std::chrono::steady_clock::now();
    Eigen::VectorXd approx0(n_eval), approx1(n_eval);
    detail::parallel_for(n_eval, [&](int i) {
      approx0(i) = eval_global(model, eval_points.point(i), Deriv::none);
      approx1(i) = eval_global(model, eval_points.point(i), deriv);
    });
    row.eval_seconds = seconds_since(t_eval);

    row.e0 = relative_l2_error(approx0, exact0);
    row.e1 = relative_l2_error(approx1, exact1);
    if (!rows.empty()) {
      row.has_orders = true;
      row.order0 = convergence_order(rows.back().e0, row.e0);
      row.order1 = convergence_order(rows.back().e1, row.e1);
    }
    rows.push_back(row);
  }
  return rows;
}

namespace {

std::string axis_name(Axis axis) { return axis == Axis::x ? "x" : "y"; }

std::string ladder_string(const std::vector<long>& ladder) {
  std::string s;
  for (std::size_t i = 0; i < ladder.size(); ++i)
    s += (i ? "," : "") + std::to_string(ladder[i]);
  return s;
}

std::string metadata_line(const StudyConfig& config) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "# drrbfpu study function=%s n_ladder=%s n_patches=%d c=%g overlap=%g mu=%g "
                "deriv=%s eval_grid=%d boundaries=included",
                (config.function == TestFunction::Id::steep_front ? "steep-front" : "tan-lines"),
                ladder_string(config.n_ladder).c_str(), config.n_patches, config.shape_c,
                config.overlap, config.mu, axis_name(config.axis).c_str(), config.eval_grid);
  return buf;
}

}  // namespace

void write_study_csv(const std::string& path, const StudyConfig& config,
                     const std::vector<ConvergenceRow>& rows) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open " + path + " for writing");
  out << metadata_line(config) << '\n';
  out << "N,Nc,c,overlap,mu,e0,order0,e1,order1,fit_seconds,eval_seconds\n";
  char buf[320];
  for (const auto& row : rows) {
    char o0[32] = "", o1[32] = "";
    if (row.has_orders) {
      std::snprintf(o0, sizeof(o0), "%.3f", row.order0);
      std::snprintf(o1, sizeof(o1), "%.3f", row.order1);
    }
    std::snprintf(buf, sizeof(buf), "%ld,%d,%g,%g,%g,%.6e,%s,%.6e,%s,%.3f,%.3f\n", row.n,
                  config.n_patches, config.shape_c, config.overlap, config.mu, row.e0, o0, row.e1,
                  o1, row.fit_seconds, row.eval_seconds);
    out << buf;
  }
  if (!out) throw FormatError("write failed: " + path);
}

void dump_surface_csv(const std::string& path, const StudyConfig& config, long n_nodes,
                      Deriv deriv) {
  StudyConfig one = config;
  one.n_ladder = {n_nodes};
  one.validate();
  const TestFunction fn = config.function == TestFunction::Id::steep_front
                              ? TestFunction::steep_front()
                              : TestFunction::tan_lines();
  const PatchCover cover = build_patch_cover(config.n_patches, config.overlap);
  FitConfig fit_config{ShapeParameter(config.shape_c)};
  fit_config.mu = config.mu;

  const int side = int(std::lround(std::sqrt(double(n_nodes))));
  const PointSet nodes = adjusted_grid(side, fn);
  Eigen::VectorXd values(nodes.size());
  for (int i = 0; i < nodes.size(); ++i)
    values(i) = fn.value(nodes.point(i).x(), nodes.point(i).y());
  const GlobalModel model = fit_global(nodes, values, cover, fit_config);

  const PointSet eval_points = adjusted_grid(config.eval_grid, fn);
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open " + path + " for writing");
  out << "x,y,approx,exact,abs_err\n";
  char buf[200];
  for (int i = 0; i < eval_points.size(); ++i) {
    const Point p = eval_points.point(i);
    const double approx = eval_global(model, p, deriv);
    double exact;
    switch (deriv) {
      case Deriv::none: exact = fn.value(p.x(), p.y()); break;
      case Deriv::dx: exact = fn.dx(p.x(), p.y()); break;
      default: exact = fn.dy(p.x(), p.y()); break;
    }
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n", p.x(), p.y(), approx,
                  exact, std::abs(exact - approx));
    out << buf;
  }
  if (!out) throw FormatError("write failed: " + path);
}

}  // namespace drrbfpu
