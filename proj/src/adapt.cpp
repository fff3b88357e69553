#include "r2r/adapt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace r2r {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Strategy strategy_from_string(const std::string& s) {
  if (s == "PS+" || s == "ps+" || s == "psplus") return Strategy::PsPlus;
  if (s == "DF" || s == "df") return Strategy::DF;
  if (s == "GB" || s == "gb") return Strategy::GB;
  if (s == "Hybrid" || s == "hybrid" || s == "hy") return Strategy::Hybrid;
  throw std::invalid_argument("unknown strategy: " + s);
}

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::PsPlus: return "PS+";
    case Strategy::DF: return "DF";
    case Strategy::GB: return "GB";
    case Strategy::Hybrid: return "Hybrid";
  }
  return "?";
}

std::string to_string(Phase p) {
  switch (p) {
    case Phase::EvalCenter: return "EvalCenter";
    case Phase::Explore: return "Explore";
    case Phase::Exploit: return "Exploit";
    case Phase::Reset: return "Reset";
    case Phase::Idle: return "Idle";
  }
  return "?";
}

double update_df(StepSizeState& ss, bool improved) {
  ss.s = improved ? std::min(ss.alpha_exp * ss.s, ss.s_max)
                  : std::max(ss.alpha_con * ss.s, ss.s_min);
  return ss.s;
}

void update_filters(StepSizeState& ss, double J_k, double J_prev,
                    const Eigen::VectorXd& x_k,
                    const Eigen::VectorXd& x_prev) {
  const double dist = (x_k - x_prev).norm();
  if (dist == 0.0)
    throw std::invalid_argument("update_filters: zero displacement");
  const double slope = (J_k - J_prev) / dist;
  ss.J_filt = ss.beta * ss.J_filt + (1.0 - ss.beta) * J_k;
  ss.g_filt = std::sqrt(ss.beta * ss.g_filt * ss.g_filt +
                        (1.0 - ss.beta) * slope * slope);
}

double select_delta(StepSizeState& ss, Strategy strategy) {
  switch (strategy) {
    case Strategy::PsPlus:
    case Strategy::DF:
      ss.delta = ss.s;
      break;
    case Strategy::GB:
    case Strategy::Hybrid: {
      // g = 0 (no slope information yet) clamps to the largest step.
      if (ss.g_filt > 0.0 && std::isfinite(ss.J_filt))
        ss.delta_gb = std::clamp(ss.J_filt / ss.g_filt, ss.s_min, ss.s_max);
      else
        ss.delta_gb = ss.s_max;
      if (strategy == Strategy::GB)
        ss.delta = ss.delta_gb;
      else
        ss.delta = (std::isfinite(ss.J_filt) && ss.J_filt <= ss.J_star)
                       ? ss.s
                       : ss.delta_gb;
      break;
    }
  }
  return ss.delta;
}

double JstarSchedule::value(int k, double j_min) const {
  switch (mode) {
    case Mode::None:
      return kInf;
    case Mode::GammaMin:
      return std::isfinite(j_min) ? gamma * j_min : kInf;
    case Mode::Exp:
      return j_unc * std::exp(-static_cast<double>(k) / tau) + floor;
    case Mode::Constant:
      return constant;
    case Mode::Table: {
      if (table.empty()) return kInf;
      const int i = std::clamp(k - 1, 0, static_cast<int>(table.size()) - 1);
      return table[static_cast<size_t>(i)];
    }
  }
  return kInf;
}

JstarSchedule JstarSchedule::default_for(Strategy s) {
  switch (s) {
    case Strategy::GB: return JstarSchedule::gamma_min();
    case Strategy::Hybrid: return JstarSchedule::exp_decay();
    default: return JstarSchedule::none();
  }
}

AcOptimizer::AcOptimizer(ControllerParams theta_nom, StepSizeState step,
                         Strategy strategy, JstarSchedule jstar,
                         BasisFn basis_fn)
    : theta_nom_(std::move(theta_nom)), ss_(step), strategy_(strategy),
      jstar_(std::move(jstar)), basis_fn_(std::move(basis_fn)),
      q_(static_cast<int>(theta_nom_.theta.size())),
      phi_best_(Eigen::VectorXd::Zero(q_)) {
  if (strategy_ == Strategy::PsPlus)
    throw std::invalid_argument("AcOptimizer: use PsPlusOptimizer for PS+");
}

Proposal AcOptimizer::ask() {
  if (pending_) throw std::logic_error("ask: proposal already outstanding");
  if (!basis_ready_) {
    basis_ = basis_fn_(theta_nom_);
    basis_ready_ = true;
  }

  Proposal prop;
  prop.phase = phase_;
  switch (phase_) {
    case Phase::EvalCenter:
    case Phase::Idle:
      prop.phi = phi_best_;
      prop.d = d_;
      prop.delta = ss_.delta;
      break;
    case Phase::Explore: {
      if (explore_sub_ == 0) {
        d_ = (d_ % q_) + 1;
        pair_delta_ = ss_.delta;
      }
      prop.phi = phi_best_;
      prop.phi[d_ - 1] += (explore_sub_ == 0 ? pair_delta_ : -pair_delta_);
      prop.d = d_;
      prop.delta = pair_delta_;
      break;
    }
    case Phase::Exploit: {
      prop.phi = phi_best_;
      // phi_best[d] is nonzero whenever a better point was found; an exact
      // zero (cancellation) steps positive.
      const double dir = phi_best_[d_ - 1] < 0.0 ? -1.0 : 1.0;
      prop.phi[d_ - 1] += dir * ss_.delta;
      prop.d = d_;
      prop.delta = ss_.delta;
      break;
    }
    case Phase::Reset:
      throw std::logic_error("ask: unexpected phase");
  }
  prop.theta = phi_to_theta(theta_nom_, basis_.V, prop.phi);
  prop.theta_positive = prop.theta.positive();
  pending_ = prop;
  return prop;
}

void AcOptimizer::delta_update_site(bool improved) {
  update_df(ss_, improved);
  ss_.J_star = jstar_.value(eval_count_, J_min_);
  select_delta(ss_, strategy_);
}

void AcOptimizer::reset_problem() {
  if (d_ != 1) {
    theta_nom_ = phi_to_theta(theta_nom_, basis_.V, phi_best_);
    try {
      basis_ = basis_fn_(theta_nom_);
    } catch (const std::exception&) {
      // Keep the previous basis when it cannot be recomputed at the new
      // anchor; the anchor itself still moves.
    }
    phi_best_.setZero();
    d_ = 0;
    phase_ = Phase::EvalCenter;
    pair_valid_ = false;
  } else {
    // Move happened on the first coordinate: keep the anchor and basis and
    // continue the sweep on the second coordinate around the best point.
    phase_ = Phase::Explore;
    explore_sub_ = 0;
    explore_fail_pairs_ = 0;
  }
}

void AcOptimizer::tell(double cost) {
  if (!pending_) throw std::logic_error("tell: no outstanding proposal");
  const Proposal prop = std::move(*pending_);
  pending_.reset();

  const double J = std::isfinite(cost) ? cost : kInf;
  ++eval_count_;

  if (std::isfinite(J)) {
    J_min_ = std::min(J_min_, J);
    if (!filter_initialized_) {
      ss_.J_filt = J;
      filter_initialized_ = true;
    } else if (pair_valid_ && std::isfinite(prev_cost_)) {
      const double dist = (prop.theta.theta - prev_theta_).norm();
      if (dist > 0.0)
        update_filters(ss_, J, prev_cost_, prop.theta.theta, prev_theta_);
    }
  }
  prev_cost_ = J;
  prev_theta_ = prop.theta.theta;
  pair_valid_ = true;

  switch (prop.phase) {
    case Phase::EvalCenter:
    case Phase::Idle:
      J_best_ = std::min(J_best_, J);
      if (prop.phase == Phase::EvalCenter) {
        phase_ = Phase::Explore;
        explore_sub_ = 0;
        explore_fail_pairs_ = 0;
      }
      break;
    case Phase::Explore: {
      if (explore_sub_ == 0) {
        pair_plus_cost_ = J;
        pair_plus_phi_ = prop.phi;
        explore_sub_ = 1;
        break;
      }
      // Pair complete; ties prefer the positive probe.
      const bool minus_wins = J < pair_plus_cost_;
      const double pair_cost = minus_wins ? J : pair_plus_cost_;
      const Eigen::VectorXd& pair_phi = minus_wins ? prop.phi : pair_plus_phi_;
      const bool improved = pair_cost < J_best_;
      delta_update_site(improved);
      if (improved) {
        phi_best_ = pair_phi;
        J_best_ = pair_cost;
        phase_ = Phase::Exploit;
      } else {
        ++explore_fail_pairs_;
        explore_sub_ = 0;
        if (ss_.delta <= ss_.s_min && explore_fail_pairs_ >= q_)
          phase_ = Phase::Idle;
      }
      break;
    }
    case Phase::Exploit: {
      const bool improved = J < J_best_;
      delta_update_site(improved);
      if (improved) {
        phi_best_ = prop.phi;
        J_best_ = J;
      } else {
        reset_problem();
      }
      break;
    }
    case Phase::Reset:
      throw std::logic_error("tell: unexpected phase");
  }
}

PsPlusOptimizer::PsPlusOptimizer(ControllerParams theta_nom,
                                 StepSizeState step, BasisFn basis_fn,
                                 int n_dims)
    : theta_nom_(std::move(theta_nom)), ss_(step),
      basis_fn_(std::move(basis_fn)), n_dims_(n_dims),
      center_phi_(Eigen::VectorXd::Zero(theta_nom_.theta.size())) {
  const int q = static_cast<int>(theta_nom_.theta.size());
  if (n_dims_ < 1 || n_dims_ > q)
    throw std::invalid_argument("PsPlusOptimizer: bad dimension count");
  ss_.delta = ss_.s;
}

Proposal PsPlusOptimizer::ask() {
  if (pending_) throw std::logic_error("ask: proposal already outstanding");
  if (!basis_ready_) {
    basis_ = basis_fn_(theta_nom_);
    basis_ready_ = true;
  }
  Proposal prop;
  if (stage_ == 0) {
    prop.phi = center_phi_;
    prop.phase = Phase::EvalCenter;
    prop.d = 0;
  } else {
    const int coord = (stage_ - 1) / 2;
    const double sign = (stage_ % 2 == 1) ? 1.0 : -1.0;
    prop.phi = center_phi_;
    prop.phi[coord] += sign * ss_.s;
    prop.phase = Phase::Explore;
    prop.d = coord + 1;
  }
  prop.delta = ss_.s;
  prop.theta = phi_to_theta(theta_nom_, basis_.V, prop.phi);
  prop.theta_positive = prop.theta.positive();
  pending_ = prop;
  return prop;
}

void PsPlusOptimizer::tell(double cost) {
  if (!pending_) throw std::logic_error("tell: no outstanding proposal");
  const Proposal prop = std::move(*pending_);
  pending_.reset();

  const double J = std::isfinite(cost) ? cost : kInf;
  ++eval_count_;
  J_best_ = std::min(J_best_, J);

  if (stage_ == 0) {
    J_center_ = J;
    probe_costs_.clear();
    probe_phis_.clear();
    ++stage_;
    return;
  }

  probe_costs_.push_back(J);
  probe_phis_.push_back(prop.phi);
  if (stage_ < 2 * n_dims_) {
    ++stage_;
    return;
  }

  // Pattern complete: move to the best strictly improving probe (earliest
  // on ties), expanding the step; otherwise stay and contract.
  int best = -1;
  for (int i = 0; i < 2 * n_dims_; ++i)
    if (probe_costs_[static_cast<size_t>(i)] < J_center_ &&
        (best < 0 || probe_costs_[static_cast<size_t>(i)] <
                         probe_costs_[static_cast<size_t>(best)]))
      best = i;
  if (best >= 0) {
    center_phi_ = probe_phis_[static_cast<size_t>(best)];
    update_df(ss_, true);
  } else {
    update_df(ss_, false);
  }
  ss_.delta = ss_.s;
  stage_ = 0;
}

std::unique_ptr<Optimizer> make_optimizer(Strategy strategy,
                                          const ControllerParams& theta_nom,
                                          const StepSizeState& hyper,
                                          const JstarSchedule& jstar,
                                          Optimizer::BasisFn basis_fn) {
  if (strategy == Strategy::PsPlus)
    return std::make_unique<PsPlusOptimizer>(theta_nom, hyper,
                                             std::move(basis_fn));
  return std::make_unique<AcOptimizer>(theta_nom, hyper, strategy, jstar,
                                       std::move(basis_fn));
}

}  // namespace r2r
