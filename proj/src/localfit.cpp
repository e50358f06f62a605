#include "drrbfpu/localfit.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "drrbfpu/linalg.hpp"

namespace drrbfpu {

void FitConfig::validate() const {
  if (!(mu >= 0.0)) throw std::invalid_argument("FitConfig: mu must be nonnegative");
  if (!(zero_function_threshold >= 0.0))
    throw std::invalid_argument("FitConfig: zero_function_threshold must be nonnegative");
  if (!(denominator_floor >= 0.0))
    throw std::invalid_argument("FitConfig: denominator_floor must be nonnegative");
}

namespace {

LocalRationalModel fit_with_mu(const Eigen::Matrix2Xd& nodes, const Eigen::VectorXd& values,
                               double f_norm, double mu, const FitConfig& config) {
  const Eigen::Index n = nodes.cols();
  const SymmetricMatrix<double> a = kernel_matrix<double>(nodes, config.c, mu);
  const CholeskyFactor<double> chol = cholesky_factor(a);

  // Lambda = (1/||f||^2) D^T A^{-1} D + A^{-1} entrywise over A^{-1}; the
  // solve result is symmetrized while packing.
  const Eigen::MatrixXd ainv = chol.solve(Eigen::MatrixXd::Identity(n, n));
  const Eigen::VectorXd w = values / f_norm;
  SymmetricMatrix<double> lambda_mat(n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j)
      lambda_mat(i, j) = 0.5 * (ainv(i, j) + ainv(j, i)) * (1.0 + w(i) * w(j));

  // Theta = (1/||f||^2) D^T D + I is diagonal.
  SymmetricMatrix<double> theta_mat(n);
  for (Eigen::Index i = 0; i < n; ++i) theta_mat(i, i) = 1.0 + w(i) * w(i);

  const EigenPair<double> pair = smallest_generalized_eigenpair(lambda_mat, theta_mat);

  LocalRationalModel model;
  model.node_indices.resize(std::size_t(n));
  std::iota(model.node_indices.begin(), model.node_indices.end(), 0);
  model.nodes = nodes;
  model.q_values = pair.eigenvector;
  model.beta = chol.solve(pair.eigenvector);
  model.alpha = chol.solve(values.cwiseProduct(pair.eigenvector).eval());
  model.lambda_min = pair.eigenvalue;
  model.f_norm = f_norm;
  model.mu_used = mu;
  model.c = config.c;
  model.denominator_floor = config.denominator_floor;
  return model;
}

}  // namespace

LocalRationalModel fit_local_rational(const Eigen::Matrix2Xd& nodes,
                                      const Eigen::VectorXd& values, const FitConfig& config) {
  config.validate();
  const Eigen::Index n = nodes.cols();
  if (n < 2) throw FitError("patch fit needs at least 2 nodes, got " + std::to_string(n));
  if (values.size() != n)
    throw std::invalid_argument("fit_local_rational: values size does not match node count");

  const double f_norm = values.norm();
  if (f_norm <= config.zero_function_threshold) {
    LocalRationalModel model;
    model.node_indices.resize(std::size_t(n));
    std::iota(model.node_indices.begin(), model.node_indices.end(), 0);
    model.nodes = nodes;
    model.q_values = Eigen::VectorXd::Zero(n);
    model.alpha = Eigen::VectorXd::Zero(n);
    model.beta = Eigen::VectorXd::Zero(n);
    model.f_norm = f_norm;
    model.mu_used = config.mu;
    model.c = config.c;
    model.denominator_floor = config.denominator_floor;
    model.zero_model = true;
    return model;
  }

  double mu = config.mu;
  for (int attempt = 0;; ++attempt) {
    try {
      return fit_with_mu(nodes, values, f_norm, mu, config);
    } catch (const NotPositiveDefiniteError& e) {
      if (attempt > 0)
        throw FitError("patch fit failed after MDI escalation (n=" + std::to_string(n) +
                       ", mu=" + std::to_string(mu) + "): " + e.what());
      mu = mu > 0.0 ? 100.0 * mu : 100.0 * kDefaultMdiIncrement;
    }
  }
}

namespace {

// Value of the denominator floor in absolute terms for this model.
double floor_abs(const LocalRationalModel& m) {
  return m.denominator_floor * m.q_values.cwiseAbs().maxCoeff();
}

Eigen::VectorXd kernel_values_at(const LocalRationalModel& m, const Point& x) {
  const Eigen::Index n = m.nodes.cols();
  Eigen::VectorXd phi(n);
  for (Eigen::Index j = 0; j < n; ++j)
    phi(j) = matern_c6_value((x - m.nodes.col(j)).norm(), m.c);
  return phi;
}

}  // namespace

double eval_local(const LocalRationalModel& model, const Point& x) {
  if (model.zero_model) return 0.0;
  const Eigen::VectorXd phi = kernel_values_at(model, x);
  const double q = model.beta.dot(phi);
  if (std::abs(q) < floor_abs(model)) throw VanishingDenominatorError(x);
  return model.alpha.dot(phi) / q;
}

double eval_local_derivative(const LocalRationalModel& model, const Point& x, Axis axis) {
  if (model.zero_model) return 0.0;
  const Eigen::Index n = model.nodes.cols();
  const int a = int(axis);
  double p = 0.0, q = 0.0, dp = 0.0, dq = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const Point d = x - model.nodes.col(j);
    const double r = d.norm();
    const double phi = matern_c6_value(r, model.c);
    const double dphi = matern_c6_slope_over_r(r, model.c) * d(a);
    p += model.alpha(j) * phi;
    q += model.beta(j) * phi;
    dp += model.alpha(j) * dphi;
    dq += model.beta(j) * dphi;
  }
  if (std::abs(q) < floor_abs(model)) throw VanishingDenominatorError(x);
  return (dp * q - p * dq) / (q * q);
}

double eval_local_lagrange(const LocalRationalModel& model, const Point& x,
                           const Eigen::VectorXd& values) {
  if (model.zero_model) return 0.0;
  const Eigen::Index n = model.nodes.cols();
  if (values.size() != n)
    throw std::invalid_argument("eval_local_lagrange: values size does not match node count");

  const double floor_q = floor_abs(model);
  for (Eigen::Index i = 0; i < n; ++i)
    if (std::abs(model.q_values(i)) < floor_q)
      throw LagrangeUnavailableError("Lagrange form unavailable: node denominator value " +
                                     std::to_string(i) + " below floor");

  const Eigen::VectorXd phi = kernel_values_at(model, x);
  const double q_x = model.beta.dot(phi);
  if (std::abs(q_x) < floor_q) throw VanishingDenominatorError(x);

  // A_{phi_R} is the fit kernel matrix (same MDI increment) scaled by 1/(q_i q_j).
  const SymmetricMatrix<double> a = kernel_matrix<double>(model.nodes, model.c, model.mu_used);
  SymmetricMatrix<double> a_r(n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j)
      a_r(i, j) = a(i, j) / (model.q_values(i) * model.q_values(j));

  const Eigen::VectorXd alpha_tilde = cholesky_factor(a_r).solve(values);
  double acc = 0.0;
  for (Eigen::Index j = 0; j < n; ++j)
    acc += phi(j) / (q_x * model.q_values(j)) * alpha_tilde(j);
  return acc;
}

}  // namespace drrbfpu
