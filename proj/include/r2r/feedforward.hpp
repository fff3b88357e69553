#pragma once

#include <functional>

#include <Eigen/Dense>

#include "r2r/actuator.hpp"
#include "r2r/trajectory.hpp"

namespace r2r {

inline constexpr int kNumParams = 9;

/// Thrown when the flatness inversion has no real solution somewhere on the
/// reference trajectory (the magnetic force cannot be repulsive) or when the
/// reference flux would saturate.
struct InfeasibleTrajectoryError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Normalized controller parameter vector. Each component scales one of the
/// nine uncertain physical parameters relative to its nominal value, so the
/// all-ones vector reproduces the nominal device.
struct ControllerParams {
  Eigen::VectorXd theta;
  PhysicalParams nominal;

  static ControllerParams ones(const PhysicalParams& nominal) {
    return {Eigen::VectorXd::Ones(kNumParams), nominal};
  }

  bool positive() const { return (theta.array() > 0.0).all(); }

  PhysicalParams denormalized() const {
    PhysicalParams p = nominal;
    auto u = nominal.uncertain();
    for (int i = 0; i < kNumParams; ++i) u[i] *= theta[i];
    p.set_uncertain(u);
    return p;
  }
};

/// Fisher matrix of the feedforward law together with its eigen-basis.
/// Columns of V are orthonormal and sorted by descending eigenvalue; each
/// column's sign is fixed so that its largest-magnitude entry is positive.
struct SensitivityBasis {
  Eigen::MatrixXd F;
  Eigen::MatrixXd V;
  Eigen::VectorXd eigenvalues;
};

nlohmann::json basis_to_json(const SensitivityBasis& b);

struct FluxRef {
  double lambda;      // Wb
  double lambda_dot;  // Wb/s
};

/// Reference flux linkage obtained by inverting the force balance along the
/// quintic position reference; the time derivative comes from a central
/// finite difference with the given step.
FluxRef lambda_ref(double t, const ControllerParams& theta,
                   double fd_step = 1e-7);

/// Feedforward voltage by model inversion. For t beyond the trajectory end
/// the value computed at tf is held.
double u_ff(double t, const ControllerParams& theta);

/// True when the inversion radicand is nonnegative and the reference flux
/// stays strictly below saturation on a uniform grid over the trajectory.
bool check_feasible(const ControllerParams& theta, int grid_points = 1000);

/// Drive callable for the switching simulator, with the de-normalized
/// parameters and reference trajectory resolved once up front.
std::function<double(double)> make_drive(const ControllerParams& theta);

/// Componentwise central finite-difference sensitivity of f(t, theta) with
/// relative step h (absolute step h*max(|theta_i|, 1)).
Eigen::VectorXd fd_sensitivity(
    const std::function<double(double, const Eigen::VectorXd&)>& f, double t,
    const Eigen::VectorXd& theta, double rel_step = 1e-6);

/// Sensitivity of the feedforward voltage to the normalized parameters.
Eigen::VectorXd sensitivity(double t, const ControllerParams& theta);

/// Fisher matrix by composite Simpson quadrature of the sensitivity outer
/// products over the trajectory interval, plus its sorted eigen-basis.
/// nodes must be odd.
SensitivityBasis fisher(const ControllerParams& theta_nom, int nodes = 201);

/// theta = theta_nom + V * phi. Positivity of the result is reported by
/// ControllerParams::positive(), not enforced here.
ControllerParams phi_to_theta(const ControllerParams& theta_nom,
                              const Eigen::MatrixXd& V,
                              const Eigen::VectorXd& phi);

}  // namespace r2r
