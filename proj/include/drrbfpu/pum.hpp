#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>
#include <vector>

#include "drrbfpu/geometry.hpp"
#include "drrbfpu/localfit.hpp"

namespace drrbfpu {

enum class Deriv { none, dx, dy };

/// Shepard weights at a point: nonnegative, supported on the covering patches,
/// summing to one.
struct ShepardWeights {
  std::vector<int> patch_indices;  // covering patches, ascending
  Eigen::VectorXd weights;
};

ShepardWeights shepard_weights(const Point& x, const PatchCover& cover);

/// Blended global model. Derivative evaluation differentiates the local
/// rational models only; the weight kernel enters through its values alone and
/// this library defines no derivative of it.
struct GlobalModel {
  PointSet points;  // trial nodes the per-patch indices refer to
  PatchCover cover;
  std::vector<LocalRationalModel> locals;  // one per patch
  FitConfig config;
  PatchIndex index;  // rebuilt on load, not serialized
};

/// Fits every patch (independent fits run in parallel). Any patch failure
/// aborts with the aggregated report; a partially fitted model is never
/// returned.
GlobalModel fit_global(const PointSet& points, const Eigen::VectorXd& values,
                       const PatchCover& cover, const FitConfig& config);

/// S(x) = sum_l w_l(x) R_l(x), or its direct derivative
/// sum_l w_l(x) D R_l(x). Weight derivatives are never computed.
double eval_global(const GlobalModel& model, const Point& x, Deriv deriv = Deriv::none);

/// Per-point comparison of the global error against the worst covering-patch
/// local error: |exact - S| <= max_l |exact - R_l| + 1e-12 max(1, |exact|).
struct ErrorBoundReport {
  int n_points = 0;
  int violations = 0;
  double max_excess = 0.0;  // largest amount by which the bound was exceeded
  Point worst_point = Point::Zero();
};

ErrorBoundReport error_bound_report(const GlobalModel& model,
                                    const std::function<double(double, double)>& exact,
                                    const PointSet& eval_points, Deriv deriv);

/// Versioned plain-text model format ("drrbfpu-model v1", %.17g numbers).
/// A round-tripped model reproduces evaluations to 1e-14 relative.
void save_model(const std::string& path, const GlobalModel& model);
GlobalModel load_model(const std::string& path);

}  // namespace drrbfpu
