#pragma once

// Test-only oracles and generators. Everything here is independent of the
// library's solver path: long double arithmetic, explicit inverses, and a
// hand-rolled cyclic Jacobi eigensolver.

#include <Eigen/Core>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace testsupport {

using MatLD = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using VecLD = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

// Cyclic Jacobi eigendecomposition of a symmetric matrix. Returns eigenvalues
// ascending with matching eigenvector columns.
inline void jacobi_eigen(MatLD a, VecLD& evals, MatLD& evecs) {
  const Eigen::Index n = a.rows();
  evecs = MatLD::Identity(n, n);
  const long double scale = a.norm() + 1e-300L;
  for (int sweep = 0; sweep < 200; ++sweep) {
    long double off = 0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(off) < 1e-32L * scale) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-40L * scale) continue;
        const long double theta = (a(q, q) - a(p, p)) / (2 * a(p, q));
        long double t = 1 / (std::abs(theta) + std::sqrt(theta * theta + 1));
        if (theta < 0) t = -t;
        const long double c = 1 / std::sqrt(t * t + 1);
        const long double s = t * c;
        const long double app = a(p, p), aqq = a(q, q), apq = a(p, q);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = a(q, p) = 0;
        for (Eigen::Index k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const long double akp = a(k, p), akq = a(k, q);
          a(k, p) = a(p, k) = c * akp - s * akq;
          a(k, q) = a(q, k) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const long double vkp = evecs(k, p), vkq = evecs(k, q);
          evecs(k, p) = c * vkp - s * vkq;
          evecs(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  evals.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) evals(i) = a(i, i);
  // selection sort keeps eigenvector columns aligned
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index best = i;
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (evals(j) < evals(best)) best = j;
    if (best != i) {
      std::swap(evals(i), evals(best));
      evecs.col(i).swap(evecs.col(best));
    }
  }
}

// Gauss-Jordan inverse with partial pivoting.
inline MatLD gauss_jordan_inverse(MatLD a) {
  const Eigen::Index n = a.rows();
  MatLD inv = MatLD::Identity(n, n);
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index piv = col;
    for (Eigen::Index r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    if (a(piv, col) == 0) throw std::runtime_error("gauss_jordan_inverse: singular matrix");
    a.row(col).swap(a.row(piv));
    inv.row(col).swap(inv.row(piv));
    const long double d = a(col, col);
    a.row(col) /= d;
    inv.row(col) /= d;
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r == col) continue;
      const long double f = a(r, col);
      if (f == 0) continue;
      a.row(r) -= f * a.row(col);
      inv.row(r) -= f * inv.row(col);
    }
  }
  return inv;
}

struct GeneralizedPair {
  long double eigenvalue;
  VecLD eigenvector;  // unit norm, largest-magnitude entry positive
};

// Smallest generalized eigenpair via the explicit inverse square root of
// theta: B = theta^{-1/2} lambda theta^{-1/2}, a different reduction than the
// library's Cholesky route.
inline GeneralizedPair generalized_smallest_oracle(const MatLD& lambda, const MatLD& theta) {
  VecLD tvals;
  MatLD tvecs;
  jacobi_eigen(theta, tvals, tvecs);
  const Eigen::Index n = theta.rows();
  MatLD isqrt = MatLD::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(tvals(i) > 0)) throw std::runtime_error("oracle: theta not positive definite");
    isqrt += tvecs.col(i) * tvecs.col(i).transpose() / std::sqrt(tvals(i));
  }
  MatLD b = isqrt * lambda * isqrt;
  b = ((b + b.transpose()) / 2).eval();
  VecLD bvals;
  MatLD bvecs;
  jacobi_eigen(b, bvals, bvecs);

  GeneralizedPair out;
  out.eigenvalue = bvals(0);
  out.eigenvector = isqrt * bvecs.col(0);
  out.eigenvector /= out.eigenvector.norm();
  Eigen::Index imax = 0;
  out.eigenvector.cwiseAbs().maxCoeff(&imax);
  if (out.eigenvector(imax) < 0) out.eigenvector = -out.eigenvector;
  return out;
}

inline long double vector_angle(const VecLD& a, const VecLD& b) {
  long double c = std::abs(a.dot(b)) / (a.norm() * b.norm());
  if (c > 1) c = 1;
  return std::acos(c);
}

// C6 Matern kernel in long double, independent of the library implementation.
inline long double matern_ld(long double r, long double c) {
  const long double t = c * r;
  return std::exp(-t) * (15.0L + t * (15.0L + t * (6.0L + t)));
}

// Brute-force rational patch fit: explicit inverse plus the generalized
// eigen-oracle above.
struct PatchOracle {
  long double lambda_min;
  VecLD q;
  VecLD alpha;
  VecLD beta;
};

inline PatchOracle brute_force_patch(const Eigen::Matrix2Xd& nodes, const Eigen::VectorXd& values,
                                     double c, double mu) {
  const Eigen::Index n = nodes.cols();
  MatLD a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const long double dx = (long double)(nodes(0, i)) - (long double)(nodes(0, j));
      const long double dy = (long double)(nodes(1, i)) - (long double)(nodes(1, j));
      a(i, j) = matern_ld(std::sqrt(dx * dx + dy * dy), (long double)c);
    }
    a(i, i) += (long double)mu;
  }
  const MatLD ainv = gauss_jordan_inverse(a);
  const VecLD f = values.cast<long double>();
  const long double fsq = f.squaredNorm();
  const MatLD d = f.asDiagonal();
  MatLD lam = d.transpose() * ainv * d / fsq + ainv;
  lam = ((lam + lam.transpose()) / 2).eval();
  MatLD theta = d.transpose() * d / fsq + MatLD::Identity(n, n);
  theta = ((theta + theta.transpose()) / 2).eval();

  const GeneralizedPair pair = generalized_smallest_oracle(lam, theta);
  PatchOracle out;
  out.lambda_min = pair.eigenvalue;
  out.q = pair.eigenvector;
  out.beta = ainv * pair.eigenvector;
  out.alpha = ainv * (f.cwiseProduct(pair.eigenvector)).eval();
  return out;
}

// --- generators -------------------------------------------------------------

inline Eigen::Matrix2Xd random_nodes(int n, double min_sep, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Eigen::Vector2d> pts;
  int guard = 0;
  while (int(pts.size()) < n) {
    if (++guard > 200000) throw std::runtime_error("random_nodes: sampling stalled");
    Eigen::Vector2d p(u(rng), u(rng));
    bool ok = true;
    for (const auto& q : pts)
      if ((p - q).norm() < min_sep) {
        ok = false;
        break;
      }
    if (ok) pts.push_back(p);
  }
  Eigen::Matrix2Xd out(2, n);
  for (int i = 0; i < n; ++i) out.col(i) = pts[std::size_t(i)];
  return out;
}

// Smooth synthetic data: a random low-frequency trig/polynomial blend.
inline Eigen::VectorXd smooth_values(const Eigen::Matrix2Xd& nodes, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
  Eigen::VectorXd out(nodes.cols());
  for (Eigen::Index i = 0; i < nodes.cols(); ++i) {
    const double x = nodes(0, i), y = nodes(1, i);
    out(i) = a + b * std::sin(2.1 * x + 0.7 * y) + c * std::cos(1.3 * y - 0.4 * x) + d * x * y;
  }
  return out;
}

inline Eigen::MatrixXd random_symmetric(int n, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = u(rng);
  return 0.5 * (m + m.transpose());
}

inline Eigen::MatrixXd random_spd(int n, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = u(rng);
  return r.transpose() * r / double(n) + 0.4 * Eigen::MatrixXd::Identity(n, n);
}

}  // namespace testsupport
