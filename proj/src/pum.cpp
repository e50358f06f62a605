#include "drrbfpu/pum.hpp"

#include <cassert>
#include <cmath>
#include <string>

#include "parallel.hpp"

namespace drrbfpu {

ShepardWeights shepard_weights(const Point& x, const PatchCover& cover) {
  ShepardWeights out;
  out.patch_indices = covering_patches(x, cover);  // throws CoverageError when empty
  const int k = int(out.patch_indices.size());
  out.weights.resize(k);
  double sum = 0.0;
  for (int i = 0; i < k; ++i) {
    const int l = out.patch_indices[i];
    const double r = (x - cover.center(l)).norm() / cover.radius(l);
    out.weights(i) = wendland_c4_value(r);
    sum += out.weights(i);
  }
  // psi > 0 strictly inside the support, so a covered point cannot sum to zero
  if (!(sum > 0.0)) throw CoverageError(x);
  out.weights /= sum;
  return out;
}

GlobalModel fit_global(const PointSet& points, const Eigen::VectorXd& values,
                       const PatchCover& cover, const FitConfig& config) {
  config.validate();
  if (values.size() != points.size())
    throw std::invalid_argument("fit_global: values size does not match point count");

  const PatchMembership membership = assign_members(points, cover);
  if (!membership.deficient.empty()) {
    std::string msg = "patches with fewer than 2 member points:";
    for (int l : membership.deficient) msg += " " + std::to_string(l);
    throw FitFailureError(msg, membership.deficient);
  }

  const int nc = cover.count();
  std::vector<LocalRationalModel> locals(static_cast<std::size_t>(nc));
  std::vector<std::string> failures(static_cast<std::size_t>(nc));
  detail::parallel_for(nc, [&](int l) {
    const auto& idx = membership.members[std::size_t(l)];
    Eigen::Matrix2Xd nodes(2, Eigen::Index(idx.size()));
    Eigen::VectorXd vals(Eigen::Index(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) {
      nodes.col(Eigen::Index(k)) = points.point(idx[k]);
      vals(Eigen::Index(k)) = values(idx[k]);
    }
    try {
      locals[std::size_t(l)] = fit_local_rational(nodes, vals, config);
      locals[std::size_t(l)].node_indices = idx;
    } catch (const Error& e) {
      failures[std::size_t(l)] = e.what();
    }
  });

  std::vector<int> failed_ids;
  std::string summary = "patch fit failures:";
  for (int l = 0; l < nc; ++l) {
    if (!failures[std::size_t(l)].empty()) {
      failed_ids.push_back(l);
      summary += "\n  patch " + std::to_string(l) + ": " + failures[std::size_t(l)];
    }
  }
  if (!failed_ids.empty()) throw FitFailureError(summary, failed_ids);

  GlobalModel model;
  model.points = points;
  model.cover = cover;
  model.locals = std::move(locals);
  model.config = config;
  model.index = PatchIndex(cover);
  return model;
}

double eval_global(const GlobalModel& model, const Point& x, Deriv deriv) {
  const std::vector<int> ls = model.index.covering(x);
  if (ls.empty()) throw CoverageError(x);

  const int k = int(ls.size());
  double psi_sum = 0.0;
  Eigen::VectorXd psi(k);
  for (int i = 0; i < k; ++i) {
    const int l = ls[std::size_t(i)];
    psi(i) = wendland_c4_value((x - model.cover.center(l)).norm() / model.cover.radius(l));
    psi_sum += psi(i);
  }
  if (!(psi_sum > 0.0)) throw CoverageError(x);

  double acc = 0.0;
  for (int i = 0; i < k; ++i) {
    if (psi(i) == 0.0) continue;
    const int l = ls[std::size_t(i)];
    double r_l;
    try {
      r_l = deriv == Deriv::none
                ? eval_local(model.locals[std::size_t(l)], x)
                : eval_local_derivative(model.locals[std::size_t(l)], x,
                                        deriv == Deriv::dx ? Axis::x : Axis::y);
    } catch (const VanishingDenominatorError& e) {
      throw VanishingDenominatorError(e.point(), l);
    }
    acc += psi(i) / psi_sum * r_l;
  }
  return acc;
}

ErrorBoundReport error_bound_report(const GlobalModel& model,
                                    const std::function<double(double, double)>& exact,
                                    const PointSet& eval_points, Deriv deriv) {
  ErrorBoundReport report;
  report.n_points = eval_points.size();
  for (int p = 0; p < eval_points.size(); ++p) {
    const Point x = eval_points.point(p);
    const std::vector<int> ls = model.index.covering(x);
    if (ls.empty()) throw CoverageError(x);

    const double ex = exact(x.x(), x.y());
    double psi_sum = 0.0, global = 0.0, worst_local = 0.0;
    std::vector<double> psi(ls.size()), local(ls.size());
    for (std::size_t i = 0; i < ls.size(); ++i) {
      const int l = ls[i];
      psi[i] = wendland_c4_value((x - model.cover.center(l)).norm() / model.cover.radius(l));
      psi_sum += psi[i];
      local[i] = deriv == Deriv::none
                     ? eval_local(model.locals[std::size_t(l)], x)
                     : eval_local_derivative(model.locals[std::size_t(l)], x,
                                             deriv == Deriv::dx ? Axis::x : Axis::y);
      worst_local = std::max(worst_local, std::abs(ex - local[i]));
    }
    if (!(psi_sum > 0.0)) throw CoverageError(x);
    for (std::size_t i = 0; i < ls.size(); ++i) global += psi[i] / psi_sum * local[i];

    const double excess =
        std::abs(ex - global) - worst_local - 1e-12 * std::max(1.0, std::abs(ex));
    if (excess > 0.0) {
      ++report.violations;
      if (excess > report.max_excess) {
        report.max_excess = excess;
        report.worst_point = x;
      }
    }
  }
  return report;
}

}  // namespace drrbfpu
