#pragma once
/**
 * @file verify.hpp
 * @brief Self-verification suites: cancellation identity, allocator vs. an
 *        independent bisection oracle, and the post-combining SINR law.
 */

#include <Eigen/Dense>
#include <cstdint>

#include "cfmgm/cpdft.hpp"

namespace cfmgm {

struct CancellationSuiteResult {
  int n = 0;
  int channels = 0;
  double max_gain_err = 0.0;   // |gain - N| over all g == g'
  double max_cross_err = 0.0;  // |cross term| over all g != g'
  double tolerance = 0.0;
  bool pass = false;
};

/// Random channels with entry moduli in [0.2, 2]; every ordered group pair
/// is checked. A bank override replaces the freshly built bank (fault hook).
CancellationSuiteResult run_cancellation_suite(int n, int channels,
                                               double tolerance,
                                               std::uint64_t seed,
                                               const PrecoderBank* bank = nullptr);

/// Max-min target via bisection on the budget-feasibility predicate
/// sum_g(t / A_g) <= P. Deliberately avoids the closed form it checks.
double lp_bisection_mmf_target(const Eigen::VectorXd& gains, double budget_mw);

struct AllocatorSuiteResult {
  int instances = 0;
  double max_rel_err = 0.0;         // closed form vs. oracle
  double max_activeness_err = 0.0;  // relative spread of A_g p_g
  double max_budget_err = 0.0;      // relative budget residual
  bool pass = false;
};

AllocatorSuiteResult run_allocator_oracle_suite(int instances, int max_groups,
                                                double rel_tolerance,
                                                std::uint64_t seed);

struct SinrMomentResult {
  int frames = 0;
  double empirical_sinr = 0.0;
  double predicted_sinr = 0.0;
  double rel_err = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Empirical SINR of noisy end-to-end frames against N p_g / (sigma^2 ||e~||^2).
SinrMomentResult run_sinr_moment_suite(int frames, double tolerance,
                                       std::uint64_t seed);

}  // namespace cfmgm
