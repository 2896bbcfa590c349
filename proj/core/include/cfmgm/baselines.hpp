#pragma once
/**
 * @file baselines.hpp
 * @brief CSIT-based time-division baselines: MRT with bisection power
 *        control and a smoothed max-min beamforming ascent.
 */

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "cfmgm/channel.hpp"
#include "cfmgm/config.hpp"
#include "cfmgm/rng.hpp"
#include "cfmgm/transceiver.hpp"

namespace cfmgm {

struct BeamformerSet {
  std::vector<Eigen::VectorXcd> beams;  // w_g with power included

  double total_power_mw() const;
};

/// |h^T w_g|^2 / (sum_{g' != g} |h^T w_{g'}|^2 + sigma^2).
double conventional_sinr(const Eigen::VectorXcd& h, const BeamformerSet& beams,
                         int g, double noise_mw);

/// Unit-norm MRT directions, one per group (sum of served channels). A zero
/// channel sum falls back to the first served user's direction.
std::vector<Eigen::VectorXcd> mrt_beamformers(
    const std::vector<std::vector<Eigen::VectorXcd>>& served);

/// Precomputed |h_{g,k}^T d_{g'}|^2 table for the fixed-point iteration.
struct GainTable {
  std::vector<Eigen::MatrixXd> rows;  // rows[g](k, g')

  static GainTable build(const std::vector<Eigen::VectorXcd>& directions,
                         const std::vector<std::vector<Eigen::VectorXcd>>& served);
};

/// Standard-interference-function feasibility of a max-min target: iterate
/// q_g <- t * max_k (sigma^2 + interference) / gain from q = 0. The iterate
/// is componentwise nondecreasing (checked on every call); infeasible once
/// the budget is exceeded.
bool power_target_feasible(double target, const GainTable& gains,
                           double noise_mw, double p_t_mw,
                           Eigen::VectorXd* powers_out = nullptr);

struct PowerControlResult {
  Eigen::VectorXd powers_mw;
  double target = 0.0;     // largest feasible max-min SINR
  bool zero_gain = false;  // a group had a zero-gain served user
};

/// Bisection on the target SINR with fixed unit directions; the returned
/// allocation meets the target within relative 1e-6.
PowerControlResult maxmin_power_control(
    const std::vector<Eigen::VectorXcd>& directions,
    const std::vector<std::vector<Eigen::VectorXcd>>& served, double p_t_mw,
    double noise_mw);

struct ScaOptions {
  int restarts = 5;
  int max_iters = 500;
  double tau = 0.1;          // log-sum-exp smoothing temperature
  int anneal_period = 50;    // iterations between tau reductions
  double anneal_factor = 0.5;
  double tau_floor = 1e-3;
  double step_shrink = 0.5;  // backtracking factor
  double step_grow = 1.5;
  double init_perturbation = 0.5;  // restart jitter around MRT directions
};

struct ScaTracePoint {
  int iter;
  double tau;
  double objective;
};

struct ScaResult {
  BeamformerSet beams;
  double min_rate = 0.0;  // true (unsmoothed) worst user rate, bits/slot
  double smoothed_objective = 0.0;
  bool iteration_budget_exhausted = false;
  std::vector<ScaTracePoint> trace;  // accepted steps of the best restart
};

/// Projected gradient ascent on the log-sum-exp smoothed minimum user rate,
/// with backtracking line search, tau annealing and best-of-restarts.
ScaResult sca_mmf_beamforming(
    const std::vector<std::vector<Eigen::VectorXcd>>& served, double p_t_mw,
    double noise_mw, const ScaOptions& opts, Rng& rng);

struct SlotSchedule {
  // slots[n][g] = indices of group-g users served in slot n
  std::vector<std::vector<std::vector<int>>> slots;

  int n_slots() const { return static_cast<int>(slots.size()); }
};

/// Random permutation per group dealt round-robin into the slots; per-slot
/// loads differ by at most one.
SlotSchedule time_division_schedule(const std::vector<int>& group_sizes,
                                    int n_slots, std::uint64_t seed);

enum class TdScheme { kMrt, kSca };

/// One full-G BeamformerSet per slot; groups without served users carry a
/// zero beam.
struct TdDecisions {
  std::vector<BeamformerSet> per_slot;
};

TdDecisions td_beamforming_decisions(TdScheme scheme, const ChannelSet& channels,
                                     const SlotSchedule& schedule,
                                     double p_slot_mw, double noise_mw,
                                     const ScaOptions& sca_opts, Rng& rng);

/// Frame rate = factor * sum over slots of min-over-groups slot rates;
/// factor is 1/N under per-slot normalization, 1 per-frame.
RateReport td_rates_from_decisions(const ChannelSet& channels,
                                   const SlotSchedule& schedule,
                                   const TdDecisions& decisions,
                                   double noise_mw, RateNormalization norm);

RateReport td_mmf_rate(TdScheme scheme, const ChannelSet& channels,
                       const SlotSchedule& schedule, double p_slot_mw,
                       double noise_mw, const ScaOptions& sca_opts, Rng& rng,
                       RateNormalization norm);

}  // namespace cfmgm
