// Scratch numeric probe used during development; not installed.
#include <cstdio>

#include "r2r/feedforward.hpp"

using namespace r2r;

int main() {
  const PhysicalParams nom = PhysicalParams::nominal();
  const ControllerParams theta = ControllerParams::ones(nom);

  // Reference flux at the start of the stroke.
  const FluxRef fr0 = lambda_ref(nom.t0, theta);
  std::printf("lambda_ref(t0) = %.10g  lambda_dot = %.10g\n", fr0.lambda,
              fr0.lambda_dot);
  std::printf("reluctance_dz(z0) = %.10g\n", reluctance_dz(nom.z0, nom));
  std::printf("reluctance(1e-3, 0) = %.10g\n", reluctance(1e-3, 0.0, nom));

  // Feedforward magnitude scan.
  double umax = 0.0, umin = 1e300;
  for (int i = 0; i < 1000; ++i) {
    const double t = nom.t0 + (nom.tf - nom.t0) * i / 999.0;
    const double u = u_ff(t, theta);
    if (u > umax) umax = u;
    if (u < umin) umin = u;
  }
  std::printf("u_ff range on [t0,tf]: [%.6g, %.6g]\n", umin, umax);

  // Soft landing at the two working step sizes.
  for (double dt : {1e-6, 1e-7}) {
    SimOptions opts;
    opts.dt = dt;
    opts.initial_lambda = fr0.lambda;
    opts.trace_stride = 0;
    const auto out = simulate_switch(nom, make_drive(theta), opts);
    std::printf(
        "dt=%.1e: contact=%d abort=%d t_c=%.9g v_c=%.6g J=%.6g\n", dt,
        out.contact, static_cast<int>(out.abort), out.t_c, out.v_c, out.J);
  }

  // Uncontrolled switching: constant 30 V from zero flux.
  for (double dt : {1e-6, 1e-7, 5e-8}) {
    SimOptions opts;
    opts.dt = dt;
    const auto out =
        simulate_switch(nom, [](double) { return 30.0; }, opts);
    std::printf("uncontrolled dt=%.1e: contact=%d t_c=%.9g J=%.10g\n", dt,
                out.contact, out.t_c, out.J);
  }

  // Zero drive: must never contact.
  {
    SimOptions opts;
    const auto out = simulate_switch(nom, [](double) { return 0.0; }, opts);
    std::printf("zero drive: contact=%d J=%.6g\n", out.contact, out.J);
  }
  return 0;
}
