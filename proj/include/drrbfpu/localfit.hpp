#pragma once

#include <Eigen/Core>
#include <vector>

#include "drrbfpu/geometry.hpp"
#include "drrbfpu/kernels.hpp"

namespace drrbfpu {

enum class Axis { x = 0, y = 1 };

struct FitConfig {
  ShapeParameter c{35.0};
  double mu = kDefaultMdiIncrement;         // MDI increment added to the kernel diagonal
  double zero_function_threshold = 1e-14;   // on ||f_l||_2
  double denominator_floor = 1e-12;         // on |q(x)| relative to max_i |q_i|

  void validate() const;
};

/// One patch's rational model R = p/q: two RBF expansions over the patch
/// nodes sharing the kernel, with denominator node values q from the smallest
/// generalized eigenpair of the patch problem.
struct LocalRationalModel {
  std::vector<int> node_indices;  // into the owning trial point set
  Eigen::Matrix2Xd nodes;
  Eigen::VectorXd q_values;       // unit norm, sign-normalized
  Eigen::VectorXd alpha;          // numerator coefficients, (A + mu I) alpha = f .* q
  Eigen::VectorXd beta;           // denominator coefficients, (A + mu I) beta = q
  double lambda_min = 0.0;
  double f_norm = 0.0;
  double mu_used = 0.0;
  ShapeParameter c{35.0};
  double denominator_floor = 1e-12;
  bool zero_model = false;        // ||f_l|| below threshold: R identically zero

  int size() const { return int(nodes.cols()); }
};

/// Fits one patch. Escalates mu once (x100) if the kernel matrix fails to
/// factor, then reports a FitError with the patch diagnostics.
LocalRationalModel fit_local_rational(const Eigen::Matrix2Xd& nodes,
                                      const Eigen::VectorXd& values, const FitConfig& config);

/// R(x) = p(x)/q(x).
double eval_local(const LocalRationalModel& model, const Point& x);

/// Quotient rule (dp q - p dq) / q^2 with dp, dq assembled from the analytic
/// radial slope; no finite differences.
double eval_local_derivative(const LocalRationalModel& model, const Point& x, Axis axis);

/// Lagrange form through the q-scaled kernel phi_R(x, x_j) = phi(x, x_j) /
/// (q(x) q_j). Exists as a cross-check of the quotient form; needs every q_j
/// above the floor.
double eval_local_lagrange(const LocalRationalModel& model, const Point& x,
                           const Eigen::VectorXd& values);

}  // namespace drrbfpu
