#pragma once
/**
 * @file config.hpp
 * @brief Scenario configuration and unit conversions shared by every module.
 */

#include <cstdint>
#include <numbers>
#include <vector>

namespace cfmgm {

/// Rician kappa values at or above this cap (in dB) are treated as pure LoS.
inline constexpr double kKappaDbCap = 300.0;

double dbm_to_mw(double dbm);
double db_to_linear(double db);

/// Meaning of tx_power_dbm for the CSIT-free scheme: the data-symbol budget
/// (sum of p_g) or the per-slot radiated power (sum of p_g equals N * P_t).
/// Time-division baselines get a per-slot beam budget of P_t either way.
enum class PowerConvention { kTotalBudget, kPerSlot };

/// Per-entry NLoS variance: r^-2 (so kappa is the true per-entry LoS/NLoS
/// power ratio) or the literal r^-1.
enum class NlosVarianceConvention { kInverseSquareDistance, kInverseDistance };

/// Whether reported rates carry the 1/N per-slot factor.
enum class RateNormalization { kPerSlot, kPerFrame };

/// Pilot symbols are transmitted at the mean data power; they are either
/// extra on top of the data budget or folded into it.
enum class PilotPowerPolicy { kMeanDataExtra, kFoldedIntoBudget };

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  double midpoint() const { return 0.5 * (lo + hi); }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

/// All scenario parameters. Defaults reproduce the reference downlink
/// scenario: 8 BS antennas, 6 multicast groups of 24 users each,
/// kappa = 15 dB, sigma^2 = -90 dBm, P_t = 3 dBm, AoD uniform in
/// [-pi/2, pi/2], distance uniform in [50, 100] m.
struct SystemConfig {
  int n_antennas = 8;
  int n_groups = 6;
  std::vector<int> users_per_group = std::vector<int>(6, 24);
  double tx_power_dbm = 3.0;
  double noise_dbm = -90.0;
  double rician_kappa_db = 15.0;
  double element_phase_const = std::numbers::pi;  // radians per unit sin(aod)
  Interval aod_range{-std::numbers::pi / 2.0, std::numbers::pi / 2.0};
  Interval distance_range{50.0, 100.0};
  int n_trials = 500;
  std::uint64_t master_seed = 42;
  PowerConvention power_convention = PowerConvention::kTotalBudget;
  NlosVarianceConvention nlos_variance_convention =
      NlosVarianceConvention::kInverseSquareDistance;
  RateNormalization rate_normalization = RateNormalization::kPerSlot;
  PilotPowerPolicy pilot_power_policy = PilotPowerPolicy::kMeanDataExtra;
  double csir_error_rel_var = 0.0;

  int total_users() const;
  bool overloaded() const;  // K > N
  double tx_power_mw() const;
  double noise_mw() const;
  double rician_kappa_linear() const;  // clamped at kKappaDbCap
  bool pure_los() const;               // kappa at or above the cap

  /// Throws std::invalid_argument on an inconsistent scenario. The
  /// N == G + 2 slot structure is only enforced when the CSIT-free
  /// scheme is part of the run.
  void validate(bool cf_mgm_enabled) const;
};

/// Copy of cfg with a uniform number of users per group.
SystemConfig with_users_per_group(SystemConfig cfg, int users);

}  // namespace cfmgm
