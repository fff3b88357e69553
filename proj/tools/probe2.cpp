// Scratch tracking-error probe; not installed.
#include <cmath>
#include <cstdio>

#include "r2r/feedforward.hpp"

using namespace r2r;

namespace {

// Reference flux with boundary-aware differencing for the derivative.
struct RefModel {
  PhysicalParams p;
  QuinticTrajectory traj;
  double h = 1e-7;
  bool one_sided;

  RefModel(const ControllerParams& th, bool one_sided_)
      : p(th.denormalized()),
        traj(th.nominal.z0, th.nominal.zf, th.nominal.t0, th.nominal.tf),
        one_sided(one_sided_) {}

  double flux(double t) const {
    const auto pt = traj.eval(t);
    const double num = -2.0 * (p.m * pt.zdd + p.ks * (pt.z - p.zs));
    return std::sqrt(num / reluctance_dz(pt.z, p));
  }
  double flux_dot(double t) const {
    if (one_sided) {
      if (t - h < p.t0) return (flux(t + h) - flux(t)) / h;
      if (t + h > p.tf) return (flux(t) - flux(t - h)) / h;
    }
    return (flux(t + h) - flux(t - h)) / (2.0 * h);
  }
  double voltage(double t) const {
    const double te = std::min(t, p.tf);
    const double lam = flux(te);
    return flux_dot(te) + p.R * lam * reluctance(traj.eval(te).z, lam, p);
  }
};

void run(bool one_sided, double dt) {
  const PhysicalParams nom = PhysicalParams::nominal();
  const ControllerParams theta = ControllerParams::ones(nom);
  RefModel ref(theta, one_sided);

  ActuatorState s{nom.z0, 0.0, ref.flux(nom.t0), nom.t0};
  auto u = [&](double t) { return ref.voltage(t); };

  std::printf("one_sided=%d dt=%.0e\n", one_sided, dt);
  const double checkpoints[] = {0.5e-3, 1.0e-3, 1.5e-3, 2.0e-3, 2.5e-3,
                                3.0e-3, 3.2e-3, 3.4e-3, 3.5e-3};
  int ci = 0;
  const long n = std::lround((nom.tf - nom.t0) / dt);
  for (long i = 0; i < n; ++i) {
    s = rk4_step(s, u, dt, nom);
    if (ci < 9 && s.t >= checkpoints[ci] - dt / 2) {
      const auto pt = ref.traj.eval(s.t);
      std::printf(
          "  t=%.4e  dz=%+.3e  dv=%+.3e  dlam=%+.3e\n", s.t, s.z - pt.z,
          s.v - pt.zd, s.lambda - ref.flux(std::min(s.t, nom.tf)));
      ++ci;
    }
    if (s.z <= nom.zf) {
      std::printf("  early contact t=%.6e v=%.3e\n", s.t, s.v);
      return;
    }
  }
  // continue through hold until contact or 3*tf
  SimOptions opts;
  opts.dt = dt;
  opts.initial_lambda = ref.flux(nom.t0);
  auto out = simulate_switch(nom, u, opts);
  std::printf("  outcome: contact=%d t_c=%.6g v_c=%+.6g J=%.6g\n\n",
              out.contact, out.t_c, out.v_c, out.J);
}

}  // namespace

int main() {
  run(false, 1e-6);
  run(true, 1e-6);
  run(true, 1e-7);
  return 0;
}
