#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "drrbfpu/geometry.hpp"
#include "drrbfpu/pum.hpp"

namespace drrbfpu {

// Test function 1: arctan front along a circle centered outside the domain.
double test1_value(double x, double y);
double test1_dx(double x, double y);
double test1_dy(double x, double y);

// Test function 2: scaled tangent of 9(y - x) + 1, with poles across parallel
// lines y = x + ((2k - 9) pi/2 - 1)/9. Evaluation within 1e-12 of a line is a
// SingularPointError.
double test2_value(double x, double y);
double test2_dx(double x, double y);
double test2_dy(double x, double y);

/// Closed-form benchmark functions with analytic first derivatives.
class TestFunction {
 public:
  enum class Id { steep_front, tan_lines };

  static TestFunction steep_front();
  static TestFunction tan_lines();
  static TestFunction from_name(const std::string& name);

  Id id() const { return id_; }
  const std::string& name() const { return name_; }

  double value(double x, double y) const;
  double dx(double x, double y) const;
  double dy(double x, double y) const;
  double deriv(double x, double y, Axis axis) const;

  /// Distance from the nearest singular line; +inf for steep_front.
  double singular_distance(double x, double y) const;

  /// Nudges a point off a singular line (within 1e-10 moves +1e-8 in x);
  /// identity for steep_front.
  Point adjust(const Point& p) const;

 private:
  TestFunction(Id id, std::string name) : id_(id), name_(std::move(name)) {}
  Id id_;
  std::string name_;
};

/// ||exact - approx||_2 / ||exact||_2.
double relative_l2_error(const Eigen::VectorXd& approx, const Eigen::VectorXd& exact);

/// log2(e_prev / e_curr); the node ladder halves the mesh width each rung.
double convergence_order(double e_prev, double e_curr);

struct ConvergenceRow {
  long n = 0;
  double e0 = 0.0;
  double e1 = 0.0;
  bool has_orders = false;  // false on the first rung
  double order0 = 0.0;
  double order1 = 0.0;
  double fit_seconds = 0.0;
  double eval_seconds = 0.0;
};

struct StudyConfig {
  TestFunction::Id function = TestFunction::Id::steep_front;
  std::vector<long> n_ladder = {1089, 4225, 16641, 65536};
  int n_patches = 1024;
  double shape_c = 35.0;
  double overlap = 1.0;
  double mu = 1e-8;
  int eval_grid = 100;   // eval grid side; boundaries included
  Axis axis = Axis::x;   // derivative direction for e1

  void validate() const;
};

/// Runs the ladder: per rung builds the node grid, fits the global model, and
/// measures e0/e1 on the eval grid, with inter-rung convergence orders.
std::vector<ConvergenceRow> run_convergence_study(const StudyConfig& config);

/// Study CSV: metadata line, header
/// N,Nc,c,overlap,mu,e0,order0,e1,order1,fit_seconds,eval_seconds,
/// %.6e errors, %.3f orders, empty order fields on the first rung.
void write_study_csv(const std::string& path, const StudyConfig& config,
                     const std::vector<ConvergenceRow>& rows);

/// Fits one rung of n_nodes trial points and writes x,y,approx,exact,abs_err
/// over the eval grid for the requested quantity.
void dump_surface_csv(const std::string& path, const StudyConfig& config, long n_nodes,
                      Deriv deriv);

}  // namespace drrbfpu
