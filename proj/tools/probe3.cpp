// Scratch invariant probe: flat inversion on random feasible controllers.
#include <chrono>
#include <cstdint>
#include <cstdio>

#include "r2r/feedforward.hpp"

using namespace r2r;

namespace {
struct SplitMix {
  uint64_t s;
  uint64_t next() {
    uint64_t z = (s += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  double uniform() { return (next() >> 11) * 0x1.0p-53; }
};
}  // namespace

int main() {
  const PhysicalParams nom = PhysicalParams::nominal();
  SplitMix rng{42};
  int done = 0, draws = 0, infeasible = 0;
  double worst = 0.0;
  auto t_start = std::chrono::steady_clock::now();
  while (done < 50 && draws < 5000) {
    ++draws;
    Eigen::VectorXd th(kNumParams);
    for (int i = 0; i < kNumParams; ++i) th[i] = 0.95 + 0.10 * rng.uniform();
    ControllerParams theta{th, nom};
    if (!check_feasible(theta)) {
      ++infeasible;
      continue;
    }
    SimOptions opts;
    opts.initial_lambda = lambda_ref(nom.t0, theta).lambda;
    const auto out = simulate_switch(theta.denormalized(), make_drive(theta), opts);
    if (!out.contact || out.J > worst) worst = out.contact ? out.J : 1e9;
    if (!out.contact)
      std::printf("draw %d: NO CONTACT (abort=%d)\n", draws,
                  static_cast<int>(out.abort));
    ++done;
  }
  auto ms = std::chrono::duration<double, std::milli>(
                std::chrono::steady_clock::now() - t_start).count();
  std::printf("feasible=%d infeasible=%d worst J=%.6g  (%.1f ms total)\n",
              done, infeasible, worst, ms);

  // Typical optimizer workload: nominal controller on a perturbed plant.
  PhysicalParams p_true = nom;
  auto u = p_true.uncertain();
  SplitMix rng2{7};
  for (auto& x : u) x *= 0.95 + 0.10 * rng2.uniform();
  p_true.set_uncertain(u);
  const ControllerParams theta = ControllerParams::ones(nom);
  SimOptions opts;
  opts.initial_lambda = lambda_ref(nom.t0, theta).lambda;
  auto t0 = std::chrono::steady_clock::now();
  int n = 100;
  double acc = 0;
  for (int i = 0; i < n; ++i) {
    const auto out = simulate_switch(p_true, make_drive(theta), opts);
    acc += out.J;
  }
  auto per = std::chrono::duration<double, std::milli>(
                 std::chrono::steady_clock::now() - t0).count() / n;
  std::printf("perturbed-plant op: J=%.6g  %.3f ms/op\n", acc / n, per);

  auto tf0 = std::chrono::steady_clock::now();
  auto basis = fisher(theta);
  auto fms = std::chrono::duration<double, std::milli>(
                 std::chrono::steady_clock::now() - tf0).count();
  std::printf("fisher: %.2f ms, eig[0]=%.6g eig[8]=%.6g\n", fms,
              basis.eigenvalues[0], basis.eigenvalues[8]);
  return 0;
}
