#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <type_traits>
#include <utility>

#include "drrbfpu/errors.hpp"
#include "drrbfpu/symmetric_matrix.hpp"

namespace drrbfpu {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Lower-triangular Cholesky factor L with L L^T = M; solves reuse the factor.
template <typename Scalar>
class CholeskyFactor {
 public:
  explicit CholeskyFactor(DenseMatrix<Scalar> l) : l_(std::move(l)) {}

  const DenseMatrix<Scalar>& matrixL() const { return l_; }
  Eigen::Index order() const { return l_.rows(); }

  /// x with M x = b (b may have several columns).
  template <typename Derived>
  typename Derived::PlainObject solve(const Eigen::MatrixBase<Derived>& b) const {
    typename Derived::PlainObject x = b;
    l_.template triangularView<Eigen::Lower>().solveInPlace(x);
    l_.transpose().template triangularView<Eigen::Upper>().solveInPlace(x);
    return x;
  }

  /// y with L y = b.
  template <typename Derived>
  typename Derived::PlainObject forwardSolve(const Eigen::MatrixBase<Derived>& b) const {
    typename Derived::PlainObject y = b;
    l_.template triangularView<Eigen::Lower>().solveInPlace(y);
    return y;
  }

  /// x with L^T x = b.
  template <typename Derived>
  typename Derived::PlainObject backwardSolve(const Eigen::MatrixBase<Derived>& b) const {
    typename Derived::PlainObject x = b;
    l_.transpose().template triangularView<Eigen::Upper>().solveInPlace(x);
    return x;
  }

 private:
  DenseMatrix<Scalar> l_;
};

namespace detail {

// Unblocked Cholesky scan locating the first non-positive pivot.
template <typename Scalar>
int first_bad_pivot(const SymmetricMatrix<Scalar>& m) {
  const Eigen::Index n = m.order();
  DenseMatrix<Scalar> l = DenseMatrix<Scalar>::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Scalar d = m(j, j) - l.row(j).head(j).squaredNorm();
    if (!(d > Scalar(0))) return int(j);
    using std::sqrt;
    l(j, j) = sqrt(d);
    for (Eigen::Index i = j + 1; i < n; ++i)
      l(i, j) = (m(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / l(j, j);
  }
  return int(n) - 1;  // unreachable when the caller saw a failure
}

}  // namespace detail

/// Cholesky factorization of a symmetric positive definite matrix. Throws
/// NotPositiveDefiniteError carrying the first non-positive pivot index.
template <typename Scalar>
CholeskyFactor<Scalar> cholesky_factor(const SymmetricMatrix<Scalar>& m) {
  Eigen::LLT<DenseMatrix<Scalar>> llt(m.toDense());
  if (llt.info() != Eigen::Success) throw NotPositiveDefiniteError(detail::first_bad_pivot(m));
  return CholeskyFactor<Scalar>(llt.matrixL());
}

/// Solves M x = b for SPD M without forming an inverse.
template <typename Scalar, typename Derived>
typename Derived::PlainObject solve_spd(const SymmetricMatrix<Scalar>& m,
                                        const Eigen::MatrixBase<Derived>& b) {
  static_assert(std::is_same_v<typename Derived::Scalar, Scalar>,
                "solve_spd: scalar types must match");
  if (b.rows() != m.order()) throw std::invalid_argument("solve_spd: dimension mismatch");
  return cholesky_factor(m).solve(b);
}

/// Smallest eigenpair of the generalized symmetric-definite problem
/// Lambda q = lambda Theta q.
template <typename Scalar>
struct EigenPair {
  Scalar eigenvalue = Scalar(0);
  DenseVector<Scalar> eigenvector;  // unit norm, largest-magnitude entry positive
  Scalar residual = Scalar(0);      // ||Lambda q - lambda Theta q||_2
};

/// Reduces Theta = L L^T, solves the standard symmetric problem
/// L^{-1} Lambda L^{-T} y = lambda y by a full eigendecomposition, and back-
/// transforms q = L^{-T} y. The returned pair satisfies
/// residual <= 1e-10 (||Lambda||_F + |lambda| ||Theta||_F).
template <typename Scalar>
EigenPair<Scalar> smallest_generalized_eigenpair(const SymmetricMatrix<Scalar>& lambda_mat,
                                                 const SymmetricMatrix<Scalar>& theta_mat) {
  if (lambda_mat.order() != theta_mat.order())
    throw std::invalid_argument("smallest_generalized_eigenpair: order mismatch");
  const Eigen::Index n = lambda_mat.order();
  if (n == 0) throw std::invalid_argument("smallest_generalized_eigenpair: empty problem");

  CholeskyFactor<Scalar> lt = cholesky_factor(theta_mat);

  DenseMatrix<Scalar> y = lt.forwardSolve(lambda_mat.toDense());
  DenseMatrix<Scalar> c = lt.forwardSolve(y.transpose());
  c = (Scalar(0.5) * (c + c.transpose())).eval();

  Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> es(c);
  if (es.info() != Eigen::Success) {
    Scalar offdiag = Scalar(0);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < i; ++j) offdiag += c(i, j) * c(i, j);
    using std::sqrt;
    throw EigenSolveError(int(30 * n), double(sqrt(offdiag)));
  }

  EigenPair<Scalar> pair;
  pair.eigenvalue = es.eigenvalues()(0);
  DenseVector<Scalar> q = lt.backwardSolve(es.eigenvectors().col(0));
  q /= q.norm();

  Eigen::Index imax = 0;
  q.cwiseAbs().maxCoeff(&imax);
  if (q(imax) < Scalar(0)) q = -q;
  pair.eigenvector = std::move(q);

  const DenseVector<Scalar> r =
      lambda_mat * pair.eigenvector - pair.eigenvalue * (theta_mat * pair.eigenvector);
  pair.residual = r.norm();
  using std::abs;
  const Scalar bound = Scalar(1e-10) * (lambda_mat.frobeniusNorm() +
                                        abs(pair.eigenvalue) * theta_mat.frobeniusNorm());
  if (!(pair.residual <= bound))
    throw EigenSolveError("generalized eigenpair residual " + std::to_string(double(pair.residual)) +
                          " exceeds bound " + std::to_string(double(bound)));
  return pair;
}

}  // namespace drrbfpu
