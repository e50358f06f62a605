#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace drrbfpu {

/// Base class of every runtime failure raised by this library. Argument
/// validation uses std::invalid_argument instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two nodes closer than the distinctness tolerance; the patch is degenerate.
class DegenerateNodesError : public Error {
 public:
  DegenerateNodesError(int i, int j, double distance)
      : Error("degenerate nodes: indices " + std::to_string(i) + " and " + std::to_string(j) +
              " are separated by " + std::to_string(distance)),
        i_(i),
        j_(j) {}
  int first() const { return i_; }
  int second() const { return j_; }

 private:
  int i_, j_;
};

/// Cholesky hit a non-positive pivot; the matrix is not positive definite.
class NotPositiveDefiniteError : public Error {
 public:
  explicit NotPositiveDefiniteError(int pivot_index)
      : Error("matrix is not positive definite (first non-positive pivot at index " +
              std::to_string(pivot_index) + ")"),
        pivot_(pivot_index) {}
  int pivot_index() const { return pivot_; }

 private:
  int pivot_;
};

/// Symmetric eigensolver failed to converge.
class EigenSolveError : public Error {
 public:
  EigenSolveError(int iteration_cap, double offdiag_norm)
      : Error("eigensolver did not converge within " + std::to_string(iteration_cap) +
              " iterations (off-diagonal norm " + std::to_string(offdiag_norm) + ")") {}
  explicit EigenSolveError(const std::string& what) : Error(what) {}
};

/// A point of the domain is outside every patch ball.
class CoverageError : public Error {
 public:
  explicit CoverageError(const Eigen::Vector2d& point)
      : Error("point (" + std::to_string(point.x()) + ", " + std::to_string(point.y()) +
              ") is not covered by any patch"),
        point_(point) {}
  const Eigen::Vector2d& point() const { return point_; }

 private:
  Eigen::Vector2d point_;
};

/// The rational denominator vanished at an evaluation point.
class VanishingDenominatorError : public Error {
 public:
  VanishingDenominatorError(const Eigen::Vector2d& point, int patch = -1)
      : Error("denominator vanishes at (" + std::to_string(point.x()) + ", " +
              std::to_string(point.y()) + ")" +
              (patch >= 0 ? " in patch " + std::to_string(patch) : "")),
        point_(point),
        patch_(patch) {}
  const Eigen::Vector2d& point() const { return point_; }
  int patch() const { return patch_; }

 private:
  Eigen::Vector2d point_;
  int patch_;
};

/// The Lagrange form cannot be assembled (a denominator node value is below the floor).
class LagrangeUnavailableError : public Error {
 public:
  using Error::Error;
};

/// Evaluation requested on (or too close to) a singular line of a test function.
class SingularPointError : public Error {
 public:
  using Error::Error;
};

/// A single patch fit failed.
class FitError : public Error {
 public:
  using Error::Error;
};

/// One or more patch fits failed; carries the aggregated per-patch diagnostics.
class FitFailureError : public Error {
 public:
  FitFailureError(std::string summary, std::vector<int> patch_ids)
      : Error(std::move(summary)), patch_ids_(std::move(patch_ids)) {}
  const std::vector<int>& patch_ids() const { return patch_ids_; }

 private:
  std::vector<int> patch_ids_;
};

/// Relative error metric is undefined (zero reference norm).
class MetricError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file (points CSV or model file).
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace drrbfpu
