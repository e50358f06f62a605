#pragma once

#include <Eigen/Core>
#include <cmath>
#include <stdexcept>

#include "drrbfpu/errors.hpp"
#include "drrbfpu/symmetric_matrix.hpp"

namespace drrbfpu {

/// Shape parameter of the trial kernel: dimensionless scaling of radial
/// distance, strictly positive.
class ShapeParameter {
 public:
  explicit ShapeParameter(double c) : c_(c) {
    if (!(c > 0.0)) throw std::invalid_argument("ShapeParameter: c must be positive");
  }
  double value() const { return c_; }

 private:
  double c_;
};

/// Default increment of the method of diagonal increments: 1e-8 times the
/// kernel diagonal value 15.
inline constexpr double kDefaultMdiIncrement = 1.5e-7;

/// C6 Matern trial kernel, phi(r) = exp(-c r) (15 + 15 c r + 6 (c r)^2 + (c r)^3).
template <typename Scalar = double>
Scalar matern_c6_value(Scalar r, const ShapeParameter& c) {
  if (!(r >= Scalar(0))) throw std::invalid_argument("matern_c6_value: r must be nonnegative");
  using std::exp;
  const Scalar t = Scalar(c.value()) * r;
  return exp(-t) * (Scalar(15) + t * (Scalar(15) + t * (Scalar(6) + t)));
}

/// phi'(r)/r for the C6 Matern kernel: -c^2 exp(-c r) (3 + 3 c r + (c r)^2).
/// Finite everywhere, including the removable singularity at r = 0 where the
/// value is -3 c^2. Cartesian gradients use this factor so coincident points
/// never divide by zero.
template <typename Scalar = double>
Scalar matern_c6_slope_over_r(Scalar r, const ShapeParameter& c) {
  if (!(r >= Scalar(0)))
    throw std::invalid_argument("matern_c6_slope_over_r: r must be nonnegative");
  using std::exp;
  const Scalar cs = Scalar(c.value());
  const Scalar t = cs * r;
  return -cs * cs * exp(-t) * (Scalar(3) + t * (Scalar(3) + t));
}

/// Wendland C4 weight kernel, (1-r)^6 (35 r^2 + 18 r + 3) on [0, 1], zero
/// beyond. Exposes values only: the blending scheme never differentiates the
/// weight kernel, so no derivative of psi exists in this library.
template <typename Scalar = double>
Scalar wendland_c4_value(Scalar r) {
  if (!(r >= Scalar(0))) throw std::invalid_argument("wendland_c4_value: r must be nonnegative");
  if (r >= Scalar(1)) return Scalar(0);
  const Scalar u = Scalar(1) - r;
  const Scalar u2 = u * u;
  return u2 * u2 * u2 * (Scalar(35) * r * r + Scalar(18) * r + Scalar(3));
}

/// Kernel matrix with diagonal increment: A + mu I, A_ij = phi(||x_i - x_j||).
/// Nodes are columns of a 2 x n matrix. Node pairs closer than dup_tol are
/// rejected as a degenerate patch.
template <typename Scalar = double>
SymmetricMatrix<Scalar> kernel_matrix(const Eigen::Ref<const Eigen::Matrix2Xd>& nodes,
                                      const ShapeParameter& c, Scalar mu,
                                      double dup_tol = 1e-12) {
  if (!(mu >= Scalar(0))) throw std::invalid_argument("kernel_matrix: mu must be nonnegative");
  if (!(dup_tol >= 0.0)) throw std::invalid_argument("kernel_matrix: dup_tol must be nonnegative");
  const Eigen::Index n = nodes.cols();
  SymmetricMatrix<Scalar> m(n);
  const Scalar diag = matern_c6_value(Scalar(0), c) + mu;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      const double r = (nodes.col(i) - nodes.col(j)).norm();
      if (r < dup_tol) throw DegenerateNodesError(int(i), int(j), r);
      m(i, j) = matern_c6_value(Scalar(r), c);
    }
    m(i, i) = diag;
  }
  return m;
}

}  // namespace drrbfpu
