#pragma once
/**
 * @file harness.hpp
 * @brief Seeded Monte Carlo experiment runner with deterministic parallel
 *        trials and statistical aggregation.
 */

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "cfmgm/baselines.hpp"
#include "cfmgm/config.hpp"

namespace cfmgm {

enum class Scheme { kCfMgm, kMrt, kSca, kNoop };

std::string to_string(Scheme scheme);
Scheme scheme_from_string(const std::string& name);

/// Rate reported by the no-op calibration scheme.
inline constexpr double kNoopConstantRate = 1.0;

enum class SweepParameter { kNone, kUsersPerGroup, kKappaDb, kTxPowerDbm };

std::string to_string(SweepParameter parameter);
SweepParameter sweep_parameter_from_string(const std::string& name);

SystemConfig apply_sweep_value(SystemConfig cfg, SweepParameter parameter,
                               double value);

struct SchemeResult {
  double mmf_rate = 0.0;
  Eigen::VectorXd group_rates;
  double decision_time_s = 0.0;
  bool failed = false;
  std::string error;
};

struct TrialResult {
  int trial_index = 0;
  std::map<Scheme, SchemeResult> schemes;
};

/// Evaluates every requested scheme on the realization derived from
/// (cfg.master_seed, trial_index). A scheme failure is recorded, not fatal.
/// decision_time_s is measured only when measure_time is set (wall-clock
/// values are inherently non-reproducible).
TrialResult run_trial(const SystemConfig& cfg, int trial_index,
                      const std::vector<Scheme>& schemes,
                      const ScaOptions& sca_opts, bool measure_time = false);

struct SweepSpec {
  SweepParameter parameter = SweepParameter::kNone;
  std::vector<double> values = {0.0};
  SystemConfig base;
  std::vector<Scheme> schemes = {Scheme::kCfMgm, Scheme::kMrt, Scheme::kSca};
  int trials_per_point = 0;  // 0: use base.n_trials
  ScaOptions sca;
  bool measure_time = false;

  void validate() const;
};

struct RawRecord {
  int trial = 0;
  Scheme scheme = Scheme::kCfMgm;
  SweepParameter parameter = SweepParameter::kNone;
  double sweep_value = 0.0;
  double mmf_rate = 0.0;  // NaN marks a recorded scheme failure
  double decision_time_s = 0.0;
};

struct AggregatePoint {
  Scheme scheme = Scheme::kCfMgm;
  SweepParameter parameter = SweepParameter::kNone;
  double sweep_value = 0.0;
  double mean = 0.0;
  double std_err = 0.0;
  double ci95_lo = 0.0;
  double ci95_hi = 0.0;
  int n_trials = 0;
  int n_excluded = 0;
};

struct SweepResult {
  std::vector<RawRecord> raw;
  std::vector<AggregatePoint> aggregate;
};

/// Mean / standard error / normal 95% CI per (scheme, sweep value);
/// NaN rates are excluded and counted.
std::vector<AggregatePoint> aggregate_records(
    const std::vector<RawRecord>& raw, const std::vector<Scheme>& schemes,
    SweepParameter parameter, const std::vector<double>& values);

/// Runs all points of the sweep. Trials execute on up to `workers` threads
/// (0 = hardware concurrency); results are identical for any worker count.
SweepResult run_sweep(const SweepSpec& spec, int workers = 0);

struct TimingRow {
  Scheme scheme = Scheme::kCfMgm;
  int users_per_group = 0;
  double median_s = 0.0;
  double mean_s = 0.0;
  int measurements = 0;
};

/// Times only the transmit-decision computation (allocation for the
/// CSIT-free scheme; per-slot beamforming plus power optimization for the
/// baselines): median of 5 warm measurements on a monotonic clock, each
/// batched until it spans at least ~2 ms.
std::vector<TimingRow> runtime_benchmark(const SystemConfig& cfg,
                                         const std::vector<int>& users_per_group_values,
                                         const std::vector<Scheme>& schemes,
                                         const ScaOptions& sca_opts);

}  // namespace cfmgm
