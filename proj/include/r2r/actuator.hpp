#pragma once

#include <array>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace r2r {

/// Thrown when a flux linkage reaches the saturation value, where the
/// reluctance function diverges.
struct SaturationError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Physical description of the switch: the nine uncertain parameters plus
/// the fixed quantities (coil resistance, stroke limits, motion interval).
struct PhysicalParams {
  double ks = 55.0;            // spring stiffness, N/m
  double zs = 0.015;           // spring resting position, m
  double m = 1.6e-3;           // moving mass, kg
  double k1 = 1.35;            // gap-independent core reluctance, 1/H
  double lambda_sat = 0.0229;  // saturation flux linkage, Wb
  double k3 = 3.88;            // constant gap reluctance term, 1/H
  double k4 = 7.67e4;          // gap reluctance slope, 1/(H*m)
  double k5 = 1320.0;          // fringing constant, 1/m
  double k6 = 9.73e-3;         // fringing constant, m
  double R = 50.0;             // coil resistance, Ohm (measured, not uncertain)
  double z0 = 1.0e-3;          // initial position limit, m
  double zf = 0.0;             // final position limit, m
  double t0 = 0.0;             // motion start time, s
  double tf = 3.5e-3;          // motion end time, s

  static PhysicalParams nominal() { return {}; }

  /// The nine uncertain parameters, in their canonical order.
  std::array<double, 9> uncertain() const {
    return {ks, zs, m, k1, lambda_sat, k3, k4, k5, k6};
  }
  void set_uncertain(const std::array<double, 9>& u) {
    ks = u[0]; zs = u[1]; m = u[2]; k1 = u[3]; lambda_sat = u[4];
    k3 = u[5]; k4 = u[6]; k5 = u[7]; k6 = u[8];
  }

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;
};

void to_json(nlohmann::json& j, const PhysicalParams& p);
void from_json(const nlohmann::json& j, PhysicalParams& p);

struct ActuatorState {
  double z = 0.0;       // position, m
  double v = 0.0;       // velocity, m/s
  double lambda = 0.0;  // flux linkage, Wb
  double t = 0.0;       // time, s
};

struct StateDerivative {
  double z_dot = 0.0;
  double v_dot = 0.0;
  double lambda_dot = 0.0;
};

/// Reluctance R(z, lambda) including saturation and flux fringing.
/// The fringing term is defined as its limit, 0, at z = 0.
double reluctance(double z, double lambda, const PhysicalParams& p);

/// Partial derivative of the reluctance with respect to the gap z.
/// Only the fringing term depends on z, so the result is independent of
/// lambda; at z = 0 it equals the analytic limit k4.
double reluctance_dz(double z, const PhysicalParams& p);

/// State derivative of the voltage-driven actuator. When the position sits
/// at a mechanical limit and the acceleration points outward, the
/// constrained derivative zeroes the motion (limit clamp).
StateDerivative dynamics(const ActuatorState& s, double u,
                         const PhysicalParams& p);

/// One classical RK4 step of the actuator dynamics under the drive u(t).
/// Used by the switching simulator; exposed for integration tests.
ActuatorState rk4_step(const ActuatorState& s,
                       const std::function<double(double)>& u, double dt,
                       const PhysicalParams& p);

/// Uncontrolled switching cost |v_c| of the nominal device under a constant
/// 30 V activation, computed once at dt = 1e-7 s and frozen as a regression
/// constant. Sets the scale for the no-contact penalty below.
inline constexpr double kUncontrolledCostNominal = 1.977453918;

/// Default cost charged when a run ends without contact (or aborts). Twice
/// the uncontrolled cost, so it dominates any controlled outcome.
inline constexpr double kDefaultNoContactPenalty = 2.0 * kUncontrolledCostNominal;

struct SimOptions {
  double dt = 1e-6;           // integration step, s
  double t_max = 0.0;         // absolute end time; 0 resolves to 3*tf
  bool hold_after_tf = true;  // hold u(tf) for t > tf
  double no_contact_penalty = kDefaultNoContactPenalty;
  double initial_lambda = 0.0;
  int trace_stride = 0;       // sample every N steps; 0 disables the trace
};

struct SwitchTrace {
  std::vector<double> t, z, v, lambda, u;
};

struct SwitchOutcome {
  enum class Abort { None, Saturation, NonFinite, InputError };

  bool contact = false;
  double v_c = 0.0;  // signed impact velocity, m/s
  double t_c = 0.0;  // contact time, s
  double J = 0.0;    // |v_c| on contact, penalty otherwise
  Abort abort = Abort::None;
  std::optional<SwitchTrace> trace;
};

/// Simulates one switching operation from (z0, 0, initial_lambda) at t0.
/// Fixed-step RK4; contact (z = zf) is detected by sign change and refined
/// by bisection on the last step's cubic Hermite interpolant. Runs that
/// saturate the flux or go non-finite are terminated and reported as
/// no-contact with the penalty cost.
SwitchOutcome simulate_switch(const PhysicalParams& p_true,
                              const std::function<double(double)>& u_of_t,
                              const SimOptions& opts);

}  // namespace r2r
