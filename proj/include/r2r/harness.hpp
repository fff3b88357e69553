#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "r2r/adapt.hpp"

namespace r2r {

/// Small counter-based generator; doubles come from the top 53 bits, so the
/// stream is identical on every platform.
struct SplitMix64 {
  uint64_t state = 0;

  explicit SplitMix64(uint64_t seed) : state(seed) {}
  uint64_t next() {
    uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

/// Stream key for one trial, derived only from the master seed and the
/// trial index so every strategy sees the same test set.
uint64_t derive_stream(uint64_t master_seed, uint64_t index);

/// Multiplies each of the nine uncertain parameters by an independent
/// uniform draw from [1-fraction, 1+fraction]. Fixed quantities untouched.
PhysicalParams perturb_params(const PhysicalParams& nominal, double fraction,
                              SplitMix64& rng);

/// The per-trial true plants of a campaign.
std::vector<PhysicalParams> make_test_set(const PhysicalParams& nominal,
                                          double fraction, uint64_t seed,
                                          int n_trials);

struct TrialConfig {
  Strategy strategy = Strategy::DF;
  int n_ops = 300;
  double perturbation = 0.05;
  uint64_t seed = 1;
  SimOptions sim;
  StepSizeState hyper;
  JstarSchedule jstar = JstarSchedule::none();
  PhysicalParams nominal;
  int fisher_nodes = 201;
  int feasibility_grid = 1000;
};

struct TrialTraceRow {
  int k = 0;
  Phase phase = Phase::EvalCenter;
  int d = 0;
  double delta = 0.0;
  double J = 0.0;
  double J_filt = 0.0;
  double g_filt = 0.0;
  double J_star = 0.0;
  Eigen::VectorXd phi;
  Eigen::VectorXd theta;
};

struct TrialResult {
  std::vector<double> costs;  // cost of each executed operation
  std::vector<TrialTraceRow> trace;
};

/// One adaptation trial: ask, build the feedforward drive, simulate one
/// switching operation on the true plant, tell the cost. Proposals with
/// non-positive parameters or an infeasible reference are charged one
/// operation at the penalty cost without simulating.
TrialResult run_trial(const TrialConfig& cfg, const PhysicalParams& p_true,
                      bool record_trace = false);

struct PercentileSeries {
  std::vector<double> p10, p50, p90, p975;
};

struct MonteCarloResult {
  PercentileSeries percentiles;
  std::vector<std::vector<double>> trials;  // [trial][op]
  double j_unc = 0.0;  // uncontrolled cost computed for this campaign
};

/// Linear interpolation between order statistics; pct in [0, 100].
double percentile(std::vector<double> values, double pct);

/// Runs n_trials independent trials on a common test set with a bounded
/// worker pool; aggregation is done in trial order, so the result does not
/// depend on the parallelism degree.
MonteCarloResult run_monte_carlo(const TrialConfig& cfg, int n_trials,
                                 int jobs);

/// Uncontrolled switching cost (constant 30 V from zero flux) for the given
/// plant and step size.
double uncontrolled_cost(const PhysicalParams& p, double dt);

std::string gzip_compress(const std::string& data);
std::string gzip_decompress(const std::string& data);

/// trials.csv.gz payload: header trial,op,J and one row per operation.
std::string trials_csv(const std::vector<std::vector<double>>& trials);

nlohmann::json percentiles_to_json(const MonteCarloResult& result,
                                   const nlohmann::json& config_echo);

/// Shortest round-trip decimal formatting, locale independent.
std::string format_double(double x);

void write_file(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

/// Target-cost table for the hybrid strategy: the P90 series smoothed by a
/// centered moving average (window truncated at the edges), with the first
/// entry replaced by the uncontrolled cost.
std::vector<double> calibrate_jstar(const std::vector<double>& p90,
                                    double j_unc, int window = 11);

}  // namespace r2r
