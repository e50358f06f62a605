#pragma once

#include <Eigen/Core>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace drrbfpu {

/// Symmetric matrix in packed lower-triangular storage. M = M^T holds by
/// construction: entry (i, j) and entry (j, i) are the same stored scalar.
template <typename Scalar>
class SymmetricMatrix {
 public:
  using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  SymmetricMatrix() = default;

  explicit SymmetricMatrix(Eigen::Index n) : n_(n) {
    if (n < 0) throw std::invalid_argument("SymmetricMatrix: order must be nonnegative");
    data_.assign(static_cast<std::size_t>(n) * (n + 1) / 2, Scalar(0));
  }

  /// Builds from a dense matrix, averaging m and m^T to kill rounding asymmetry.
  static SymmetricMatrix fromDense(const Eigen::Ref<const Dense>& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("SymmetricMatrix: matrix must be square");
    SymmetricMatrix out(m.rows());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j <= i; ++j) out(i, j) = (m(i, j) + m(j, i)) / Scalar(2);
    return out;
  }

  Eigen::Index order() const { return n_; }

  Scalar& operator()(Eigen::Index i, Eigen::Index j) { return data_[index(i, j)]; }
  Scalar operator()(Eigen::Index i, Eigen::Index j) const { return data_[index(i, j)]; }

  Dense toDense() const {
    Dense m(n_, n_);
    for (Eigen::Index i = 0; i < n_; ++i)
      for (Eigen::Index j = 0; j <= i; ++j) m(i, j) = m(j, i) = (*this)(i, j);
    return m;
  }

  Vector operator*(const Eigen::Ref<const Vector>& v) const {
    if (v.size() != n_) throw std::invalid_argument("SymmetricMatrix: size mismatch in product");
    Vector out = Vector::Zero(n_);
    for (Eigen::Index i = 0; i < n_; ++i) {
      Scalar acc = Scalar(0);
      for (Eigen::Index j = 0; j < n_; ++j) acc += (*this)(i, j) * v(j);
      out(i) = acc;
    }
    return out;
  }

  Scalar frobeniusNorm() const {
    Scalar acc = Scalar(0);
    for (Eigen::Index i = 0; i < n_; ++i) {
      for (Eigen::Index j = 0; j < i; ++j) acc += Scalar(2) * (*this)(i, j) * (*this)(i, j);
      acc += (*this)(i, i) * (*this)(i, i);
    }
    using std::sqrt;
    return sqrt(acc);
  }

 private:
  std::size_t index(Eigen::Index i, Eigen::Index j) const {
    if (i < 0 || j < 0 || i >= n_ || j >= n_)
      throw std::invalid_argument("SymmetricMatrix: index out of range");
    if (j > i) std::swap(i, j);
    return static_cast<std::size_t>(i) * (i + 1) / 2 + j;
  }

  Eigen::Index n_ = 0;
  std::vector<Scalar> data_;
};

}  // namespace drrbfpu
