#include "r2r/actuator.hpp"

#include <algorithm>
#include <cmath>

namespace r2r {

void PhysicalParams::validate() const {
  auto positive = [](double x, const char* name) {
    if (!(x > 0.0))
      throw std::invalid_argument(std::string(name) + " must be positive");
  };
  positive(ks, "ks");
  positive(m, "m");
  positive(k1, "k1");
  positive(lambda_sat, "lambda_sat");
  positive(k3, "k3");
  positive(k4, "k4");
  positive(k5, "k5");
  positive(k6, "k6");
  positive(R, "R");
  if (!(z0 > zf)) throw std::invalid_argument("z0 must exceed zf");
  if (!(zf >= 0.0)) throw std::invalid_argument("zf must be nonnegative");
  if (!(tf > t0)) throw std::invalid_argument("tf must exceed t0");
}

void to_json(nlohmann::json& j, const PhysicalParams& p) {
  j = nlohmann::json{{"ks", p.ks},   {"zs", p.zs}, {"m", p.m},
                     {"k1", p.k1},   {"lambda_sat", p.lambda_sat},
                     {"k3", p.k3},   {"k4", p.k4}, {"k5", p.k5},
                     {"k6", p.k6},   {"R", p.R},   {"z0", p.z0},
                     {"zf", p.zf},   {"t0", p.t0}, {"tf", p.tf}};
}

void from_json(const nlohmann::json& j, PhysicalParams& p) {
  PhysicalParams d;
  p.ks = j.value("ks", d.ks);
  p.zs = j.value("zs", d.zs);
  p.m = j.value("m", d.m);
  p.k1 = j.value("k1", d.k1);
  p.lambda_sat = j.value("lambda_sat", d.lambda_sat);
  p.k3 = j.value("k3", d.k3);
  p.k4 = j.value("k4", d.k4);
  p.k5 = j.value("k5", d.k5);
  p.k6 = j.value("k6", d.k6);
  p.R = j.value("R", d.R);
  p.z0 = j.value("z0", d.z0);
  p.zf = j.value("zf", d.zf);
  p.t0 = j.value("t0", d.t0);
  p.tf = j.value("tf", d.tf);
}

double reluctance(double z, double lambda, const PhysicalParams& p) {
  if (z < 0.0) throw std::domain_error("reluctance: z must be nonnegative");
  const double a = std::abs(lambda);
  if (a >= p.lambda_sat)
    throw SaturationError("reluctance: |lambda| reached lambda_sat");
  double fringing = 0.0;
  if (z > 0.0)
    fringing = p.k4 * z / (1.0 + p.k5 * z * std::log(p.k6 / z));
  return p.k1 / (1.0 - a / p.lambda_sat) + p.k3 + fringing;
}

double reluctance_dz(double z, const PhysicalParams& p) {
  if (z < 0.0) throw std::domain_error("reluctance_dz: z must be nonnegative");
  if (z == 0.0) return p.k4;
  // d/dz [k4 z / (1 + k5 z log(k6/z))]; the numerator collapses to
  // k4 (1 + k5 z) by the quotient rule.
  const double g = 1.0 + p.k5 * z * std::log(p.k6 / z);
  return p.k4 * (1.0 + p.k5 * z) / (g * g);
}

namespace {

// Free acceleration (no limit clamps).
double acceleration(double z, double lambda, const PhysicalParams& p) {
  return (-p.ks * (z - p.zs) -
          0.5 * lambda * lambda * reluctance_dz(z, p)) / p.m;
}

// Derivative used inside the integrator. Positions below zf can appear
// transiently in RK4 stages of the contact step; the magnetic terms are
// evaluated at the floored position so the run can cross zf and be caught
// by the event detector. Only the upper limit brakes the motion here.
StateDerivative integration_derivative(const ActuatorState& s, double u,
                                       const PhysicalParams& p) {
  const double z_eval = std::max(s.z, p.zf);
  const double lam_dot = -p.R * s.lambda * reluctance(z_eval, s.lambda, p) + u;
  const double a = acceleration(z_eval, s.lambda, p);
  if (s.z >= p.z0 && a > 0.0) return {0.0, 0.0, lam_dot};
  return {s.v, a, lam_dot};
}

ActuatorState apply(const ActuatorState& s, const StateDerivative& d,
                    double h) {
  return {s.z + h * d.z_dot, s.v + h * d.v_dot, s.lambda + h * d.lambda_dot,
          s.t + h};
}

template <typename Deriv>
ActuatorState rk4_generic(const ActuatorState& s,
                          const std::function<double(double)>& u, double dt,
                          const PhysicalParams& p, Deriv deriv) {
  const double u0 = u(s.t);
  const double um = u(s.t + 0.5 * dt);
  const double u1 = u(s.t + dt);
  const StateDerivative k1 = deriv(s, u0, p);
  const StateDerivative k2 = deriv(apply(s, k1, 0.5 * dt), um, p);
  const StateDerivative k3 = deriv(apply(s, k2, 0.5 * dt), um, p);
  const StateDerivative k4 = deriv(apply(s, k3, dt), u1, p);
  return {s.z + dt / 6.0 * (k1.z_dot + 2.0 * k2.z_dot + 2.0 * k3.z_dot + k4.z_dot),
          s.v + dt / 6.0 * (k1.v_dot + 2.0 * k2.v_dot + 2.0 * k3.v_dot + k4.v_dot),
          s.lambda + dt / 6.0 * (k1.lambda_dot + 2.0 * k2.lambda_dot +
                                 2.0 * k3.lambda_dot + k4.lambda_dot),
          s.t + dt};
}

// Cubic Hermite interpolant of the position over one step.
struct HermiteSegment {
  double t0, h;
  double z0, v0, z1, v1;

  double position(double t) const {
    const double tau = (t - t0) / h;
    const double t2 = tau * tau, t3 = t2 * tau;
    return (2.0 * t3 - 3.0 * t2 + 1.0) * z0 + (t3 - 2.0 * t2 + tau) * h * v0 +
           (-2.0 * t3 + 3.0 * t2) * z1 + (t3 - t2) * h * v1;
  }
  double velocity(double t) const {
    const double tau = (t - t0) / h;
    const double t2 = tau * tau;
    return ((6.0 * t2 - 6.0 * tau) * z0 + (-6.0 * t2 + 6.0 * tau) * z1) / h +
           (3.0 * t2 - 4.0 * tau + 1.0) * v0 + (3.0 * t2 - 2.0 * tau) * v1;
  }
};

}  // namespace

StateDerivative dynamics(const ActuatorState& s, double u,
                         const PhysicalParams& p) {
  const double lam_dot = -p.R * s.lambda * reluctance(s.z, s.lambda, p) + u;
  const double a = acceleration(s.z, s.lambda, p);
  if ((s.z >= p.z0 && a > 0.0) || (s.z <= p.zf && a < 0.0))
    return {0.0, 0.0, lam_dot};
  return {s.v, a, lam_dot};
}

ActuatorState rk4_step(const ActuatorState& s,
                       const std::function<double(double)>& u, double dt,
                       const PhysicalParams& p) {
  return rk4_generic(s, u, dt, p, integration_derivative);
}

SwitchOutcome simulate_switch(const PhysicalParams& p_true,
                              const std::function<double(double)>& u_of_t,
                              const SimOptions& opts) {
  const PhysicalParams& p = p_true;
  if (!(opts.dt > 0.0)) throw std::invalid_argument("simulate_switch: dt <= 0");
  const double t_max = opts.t_max > 0.0 ? opts.t_max : 3.0 * p.tf;
  if (t_max < p.tf)
    throw std::invalid_argument("simulate_switch: t_max < tf");

  auto u_eff = [&](double t) {
    return (opts.hold_after_tf && t > p.tf) ? u_of_t(p.tf) : u_of_t(t);
  };

  SwitchOutcome out;
  out.J = opts.no_contact_penalty;
  if (opts.trace_stride > 0) out.trace.emplace();

  ActuatorState s{p.z0, 0.0, opts.initial_lambda, p.t0};
  const double sat_limit = p.lambda_sat * (1.0 - 1e-9);

  auto record = [&](const ActuatorState& st) {
    if (!out.trace) return;
    out.trace->t.push_back(st.t);
    out.trace->z.push_back(st.z);
    out.trace->v.push_back(st.v);
    out.trace->lambda.push_back(st.lambda);
    out.trace->u.push_back(u_eff(st.t));
  };
  record(s);

  long step = 0;
  while (s.t < t_max) {
    const double h = std::min(opts.dt, t_max - s.t);
    ActuatorState next;
    try {
      next = rk4_generic(s, u_eff, h, p, integration_derivative);
    } catch (const SaturationError&) {
      out.abort = SwitchOutcome::Abort::Saturation;
      return out;
    } catch (const std::exception&) {
      out.abort = SwitchOutcome::Abort::InputError;
      return out;
    }
    if (!std::isfinite(next.z) || !std::isfinite(next.v) ||
        !std::isfinite(next.lambda)) {
      out.abort = SwitchOutcome::Abort::NonFinite;
      return out;
    }
    if (std::abs(next.lambda) >= sat_limit) {
      out.abort = SwitchOutcome::Abort::Saturation;
      return out;
    }

    if (next.z - p.zf <= 0.0) {
      // Contact. Refine within the step on the cubic Hermite interpolant.
      const HermiteSegment seg{s.t, h, s.z, s.v, next.z, next.v};
      double t_c = s.t + h;
      if (next.z - p.zf < 0.0) {
        double lo = s.t, hi = s.t + h;
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double gap = seg.position(mid) - p.zf;
          if (std::abs(gap) <= 1e-9) {
            t_c = mid;
            break;
          }
          (gap > 0.0 ? lo : hi) = mid;
          t_c = hi;
        }
      }
      out.contact = true;
      out.t_c = t_c;
      out.v_c = seg.velocity(t_c);
      out.J = std::abs(out.v_c);
      if (out.trace) {
        out.trace->t.push_back(t_c);
        out.trace->z.push_back(seg.position(t_c));
        out.trace->v.push_back(out.v_c);
        const double w = (t_c - s.t) / h;
        out.trace->lambda.push_back((1.0 - w) * s.lambda + w * next.lambda);
        out.trace->u.push_back(u_eff(t_c));
      }
      return out;
    }

    if (next.z > p.z0) {
      next.z = p.z0;
      if (next.v > 0.0) next.v = 0.0;
    }
    s = next;
    ++step;
    if (out.trace && step % opts.trace_stride == 0) record(s);
  }
  return out;
}

}  // namespace r2r
