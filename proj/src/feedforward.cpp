#include "r2r/feedforward.hpp"

#include <algorithm>
#include <cmath>

namespace r2r {

namespace {

// De-normalized parameters and reference trajectory resolved once, so the
// per-time evaluations stay cheap inside the integrator and the quadrature.
struct Model {
  PhysicalParams p;
  QuinticTrajectory traj;
  double fd_step;

  explicit Model(const ControllerParams& theta, double fd_step_ = 1e-7)
      : p(theta.denormalized()),
        traj(theta.nominal.z0, theta.nominal.zf, theta.nominal.t0,
             theta.nominal.tf),
        fd_step(fd_step_) {}

  double flux_at(double t) const {
    const auto pt = traj.eval(t);
    const double num = -2.0 * (p.m * pt.zdd + p.ks * (pt.z - p.zs));
    const double radicand = num / reluctance_dz(pt.z, p);
    if (radicand < 0.0)
      throw InfeasibleTrajectoryError(
          "lambda_ref: negative radicand on the reference trajectory");
    return std::sqrt(radicand);
  }

  FluxRef flux_ref(double t) const {
    const double lam = flux_at(t);
    // Central difference in the interior; one-sided within one step of the
    // interval ends, where the clamped reference would otherwise halve the
    // derivative and spoil the inversion.
    double lam_dot;
    if (t - fd_step < p.t0)
      lam_dot = (flux_at(t + fd_step) - lam) / fd_step;
    else if (t + fd_step > p.tf)
      lam_dot = (lam - flux_at(t - fd_step)) / fd_step;
    else
      lam_dot = (flux_at(t + fd_step) - flux_at(t - fd_step)) / (2.0 * fd_step);
    return {lam, lam_dot};
  }

  double voltage(double t) const {
    const double te = std::min(t, p.tf);
    const FluxRef fr = flux_ref(te);
    const double z = traj.eval(te).z;
    return fr.lambda_dot + p.R * fr.lambda * reluctance(z, fr.lambda, p);
  }
};

}  // namespace

nlohmann::json basis_to_json(const SensitivityBasis& b) {
  auto matrix = [](const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  nlohmann::json eig = nlohmann::json::array();
  for (Eigen::Index i = 0; i < b.eigenvalues.size(); ++i)
    eig.push_back(b.eigenvalues[i]);
  return {{"F", matrix(b.F)}, {"V", matrix(b.V)}, {"eigenvalues", eig}};
}

FluxRef lambda_ref(double t, const ControllerParams& theta, double fd_step) {
  return Model(theta, fd_step).flux_ref(t);
}

double u_ff(double t, const ControllerParams& theta) {
  return Model(theta).voltage(t);
}

bool check_feasible(const ControllerParams& theta, int grid_points) {
  if (!theta.positive()) return false;
  const Model model(theta);
  const double t0 = model.p.t0, tf = model.p.tf;
  for (int i = 0; i < grid_points; ++i) {
    const double t = t0 + (tf - t0) * i / (grid_points - 1);
    const auto pt = model.traj.eval(t);
    const double num = -2.0 * (model.p.m * pt.zdd + model.p.ks * (pt.z - model.p.zs));
    const double radicand = num / reluctance_dz(pt.z, model.p);
    if (radicand < 0.0) return false;
    if (std::sqrt(radicand) >= model.p.lambda_sat) return false;
  }
  return true;
}

std::function<double(double)> make_drive(const ControllerParams& theta) {
  return [model = Model(theta)](double t) { return model.voltage(t); };
}

Eigen::VectorXd fd_sensitivity(
    const std::function<double(double, const Eigen::VectorXd&)>& f, double t,
    const Eigen::VectorXd& theta, double rel_step) {
  Eigen::VectorXd grad(theta.size());
  Eigen::VectorXd work = theta;
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    const double h = rel_step * std::max(std::abs(theta[i]), 1.0);
    work[i] = theta[i] + h;
    const double hi = f(t, work);
    work[i] = theta[i] - h;
    const double lo = f(t, work);
    work[i] = theta[i];
    grad[i] = (hi - lo) / (2.0 * h);
  }
  return grad;
}

Eigen::VectorXd sensitivity(double t, const ControllerParams& theta) {
  const PhysicalParams nominal = theta.nominal;
  auto f = [&nominal](double tt, const Eigen::VectorXd& th) {
    return Model(ControllerParams{th, nominal}).voltage(tt);
  };
  return fd_sensitivity(f, t, theta.theta);
}

SensitivityBasis fisher(const ControllerParams& theta_nom, int nodes) {
  if (nodes < 3 || nodes % 2 == 0)
    throw std::invalid_argument("fisher: nodes must be odd and >= 3");
  const double t0 = theta_nom.nominal.t0, tf = theta_nom.nominal.tf;
  const double h = (tf - t0) / (nodes - 1);

  SensitivityBasis out;
  out.F = Eigen::MatrixXd::Zero(kNumParams, kNumParams);
  for (int i = 0; i < nodes; ++i) {
    const double t = t0 + i * h;
    const double w = (i == 0 || i == nodes - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    const Eigen::VectorXd s = sensitivity(t, theta_nom);
    out.F.noalias() += (w * h / 3.0) * (s * s.transpose());
  }
  if (!out.F.allFinite())
    throw std::runtime_error("fisher: non-finite Fisher matrix");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(out.F);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("fisher: eigendecomposition failed");

  // Eigen returns ascending eigenvalues; reverse to descending order.
  out.V.resize(kNumParams, kNumParams);
  out.eigenvalues.resize(kNumParams);
  for (int i = 0; i < kNumParams; ++i) {
    const int src = kNumParams - 1 - i;
    Eigen::VectorXd col = eig.eigenvectors().col(src);
    int arg_max = 0;
    for (int r = 1; r < kNumParams; ++r)
      if (std::abs(col[r]) > std::abs(col[arg_max])) arg_max = r;
    if (col[arg_max] < 0.0) col = -col;
    out.V.col(i) = col;
    out.eigenvalues[i] = eig.eigenvalues()[src];
  }
  return out;
}

ControllerParams phi_to_theta(const ControllerParams& theta_nom,
                              const Eigen::MatrixXd& V,
                              const Eigen::VectorXd& phi) {
  return {theta_nom.theta + V * phi, theta_nom.nominal};
}

}  // namespace r2r
