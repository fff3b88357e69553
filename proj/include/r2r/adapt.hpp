#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "r2r/feedforward.hpp"

namespace r2r {

enum class Strategy { PsPlus, DF, GB, Hybrid };

Strategy strategy_from_string(const std::string& s);
std::string to_string(Strategy s);

enum class Phase { EvalCenter, Explore, Exploit, Reset, Idle };
std::string to_string(Phase p);

/// Step-size bookkeeping shared by the strategies: the derivative-free step
/// s with its contraction/expansion rule, the filtered cost and slope, the
/// gradient-based step, and the target cost.
struct StepSizeState {
  double delta = 0.2;      // active step size in the rotated coordinates
  double s = 0.2;          // derivative-free step
  double delta_gb = std::numeric_limits<double>::quiet_NaN();
  double J_filt = std::numeric_limits<double>::quiet_NaN();  // unset until first cost
  double g_filt = 0.0;
  double J_star = std::numeric_limits<double>::infinity();
  double alpha_con = 0.7;
  double alpha_exp = 1.1;
  double s_min = 2e-10;
  double s_max = 2.0;
  double beta = 0.8;

  static StepSizeState r2r_ac() { return {}; }
  static StepSizeState r2r_ps_plus() {
    StepSizeState ss;
    ss.alpha_con = 0.5;
    ss.alpha_exp = 2.0;
    return ss;
  }
};

/// Contract on non-improvement, expand on improvement, clamped to
/// [s_min, s_max]. Returns the updated s.
double update_df(StepSizeState& ss, bool improved);

/// Exponential cost filter and root-mean-square slope filter, fed by two
/// consecutive evaluations. The caller must not pair evaluations across a
/// problem reset or with zero displacement.
void update_filters(StepSizeState& ss, double J_k, double J_prev,
                    const Eigen::VectorXd& x_k, const Eigen::VectorXd& x_prev);

/// Picks the active step for the strategy: s for DF, the clamped filtered
/// ratio for GB, and the target-cost toggle between the two for Hybrid.
/// Updates ss.delta (and ss.delta_gb where computed) and returns it.
double select_delta(StepSizeState& ss, Strategy strategy);

/// Target-cost schedule J*(k).
struct JstarSchedule {
  enum class Mode { None, GammaMin, Exp, Table, Constant };
  Mode mode = Mode::None;
  double gamma = 0.9;      // GammaMin: J* = gamma * (minimum evaluated cost)
  double j_unc = kUncontrolledCostNominal;
  double tau = 40.0;       // Exp: J*(k) = j_unc * exp(-k/tau) + floor
  double floor = 0.05;
  double constant = std::numeric_limits<double>::infinity();
  std::vector<double> table;  // per-evaluation values, clamped to the last

  static JstarSchedule none() { return {}; }
  static JstarSchedule gamma_min(double gamma = 0.9) {
    JstarSchedule js;
    js.mode = Mode::GammaMin;
    js.gamma = gamma;
    return js;
  }
  static JstarSchedule exp_decay(double j_unc = kUncontrolledCostNominal,
                                 double tau = 40.0, double floor = 0.05) {
    JstarSchedule js;
    js.mode = Mode::Exp;
    js.j_unc = j_unc;
    js.tau = tau;
    js.floor = floor;
    return js;
  }
  static JstarSchedule constant_value(double c) {
    JstarSchedule js;
    js.mode = Mode::Constant;
    js.constant = c;
    return js;
  }
  static JstarSchedule from_table(std::vector<double> values) {
    JstarSchedule js;
    js.mode = Mode::Table;
    js.table = std::move(values);
    return js;
  }

  /// k is the 1-based evaluation index; j_min the minimum evaluated cost.
  double value(int k, double j_min) const;

  static JstarSchedule default_for(Strategy s);
};

struct Proposal {
  Eigen::VectorXd phi;
  ControllerParams theta;
  bool theta_positive = true;
  Phase phase = Phase::EvalCenter;
  int d = 0;           // active coordinate, 1-based; 0 for center proposals
  double delta = 0.0;  // step size the proposal was built with
};

/// Sequential ask-tell protocol. Exactly one proposal may be outstanding.
class Optimizer {
 public:
  using BasisFn = std::function<SensitivityBasis(const ControllerParams&)>;

  virtual ~Optimizer() = default;
  virtual Proposal ask() = 0;
  virtual void tell(double cost) = 0;

  virtual const StepSizeState& step_state() const = 0;
  virtual double best_cost() const = 0;
  virtual int eval_count() const = 0;
  virtual Phase phase() const = 0;
  virtual const SensitivityBasis& basis() const = 0;
  virtual const ControllerParams& anchor() const = 0;
};

/// Adaptive-coordinates run-to-run optimizer. Explores the rotated
/// coordinates pairwise until one improves, exploits it by sign line
/// search, then resets the problem around the best point (re-anchoring and
/// recomputing the basis unless the move happened on the first coordinate).
class AcOptimizer : public Optimizer {
 public:
  AcOptimizer(ControllerParams theta_nom, StepSizeState step,
              Strategy strategy, JstarSchedule jstar, BasisFn basis_fn);

  Proposal ask() override;
  void tell(double cost) override;

  const StepSizeState& step_state() const override { return ss_; }
  double best_cost() const override { return J_best_; }
  int eval_count() const override { return eval_count_; }
  Phase phase() const override { return phase_; }
  const SensitivityBasis& basis() const override { return basis_; }
  const ControllerParams& anchor() const override { return theta_nom_; }
  const Eigen::VectorXd& phi_best() const { return phi_best_; }
  int coordinate() const { return d_; }

 private:
  void delta_update_site(bool improved);
  void reset_problem();

  ControllerParams theta_nom_;
  StepSizeState ss_;
  Strategy strategy_;
  JstarSchedule jstar_;
  BasisFn basis_fn_;
  SensitivityBasis basis_;
  bool basis_ready_ = false;

  Phase phase_ = Phase::EvalCenter;
  int q_ = kNumParams;
  int d_ = 0;
  Eigen::VectorXd phi_best_;
  double J_best_ = std::numeric_limits<double>::infinity();

  std::optional<Proposal> pending_;
  int explore_sub_ = 0;  // 0: phi+ next, 1: phi- next
  double pair_delta_ = 0.0;
  double pair_plus_cost_ = 0.0;
  Eigen::VectorXd pair_plus_phi_;
  int explore_fail_pairs_ = 0;

  int eval_count_ = 0;
  double J_min_ = std::numeric_limits<double>::infinity();
  bool filter_initialized_ = false;
  bool pair_valid_ = false;
  double prev_cost_ = 0.0;
  Eigen::VectorXd prev_theta_;
};

/// Pattern-search baseline: one basis change at the initial anchor, then
/// classic coordinate pattern search over the first n_dims rotated
/// coordinates (center plus both probes of every coordinate before each
/// move decision). The basis is never recomputed.
class PsPlusOptimizer : public Optimizer {
 public:
  PsPlusOptimizer(ControllerParams theta_nom, StepSizeState step,
                  BasisFn basis_fn, int n_dims = 4);

  Proposal ask() override;
  void tell(double cost) override;

  const StepSizeState& step_state() const override { return ss_; }
  double best_cost() const override { return J_best_; }
  int eval_count() const override { return eval_count_; }
  Phase phase() const override {
    return stage_ == 0 ? Phase::EvalCenter : Phase::Explore;
  }
  const SensitivityBasis& basis() const override { return basis_; }
  const ControllerParams& anchor() const override { return theta_nom_; }
  const Eigen::VectorXd& center() const { return center_phi_; }

 private:
  ControllerParams theta_nom_;
  StepSizeState ss_;
  BasisFn basis_fn_;
  SensitivityBasis basis_;
  bool basis_ready_ = false;
  int n_dims_;

  int stage_ = 0;  // 0: center; 1..2*n_dims: probes
  Eigen::VectorXd center_phi_;
  double J_center_ = std::numeric_limits<double>::infinity();
  std::vector<double> probe_costs_;
  std::vector<Eigen::VectorXd> probe_phis_;

  std::optional<Proposal> pending_;
  int eval_count_ = 0;
  double J_best_ = std::numeric_limits<double>::infinity();
};

std::unique_ptr<Optimizer> make_optimizer(Strategy strategy,
                                          const ControllerParams& theta_nom,
                                          const StepSizeState& hyper,
                                          const JstarSchedule& jstar,
                                          Optimizer::BasisFn basis_fn);

}  // namespace r2r
