#pragma once
/**
 * @file transceiver.hpp
 * @brief CSIT-free transmit/receive chain and the closed-form max-min
 *        power allocator.
 */

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "cfmgm/channel.hpp"
#include "cfmgm/config.hpp"
#include "cfmgm/cpdft.hpp"
#include "cfmgm/rng.hpp"

namespace cfmgm {

/// Frame of N = G + 2 symbols: G multicast streams followed by the two
/// pilot symbols (fixed known unit-modulus constants).
struct SymbolFrame {
  Eigen::VectorXcd symbols;
  std::string constellation;

  int n_groups() const { return static_cast<int>(symbols.size()) - 2; }
};

/// Unit-power QPSK data symbols, pilots c_1 = c_2 = 1.
SymbolFrame qpsk_frame(int n_groups, Rng& rng);

/// Operation counters for the allocator complexity contract: exactly K
/// comparisons to form the group minima and two passes over the G groups.
struct AllocatorOpCount {
  std::size_t comparisons = 0;
  std::size_t group_passes = 0;
};

/// Large-scale-only gain a = |alpha|^2 / sigma^2 = r^-2 / sigma^2.
double effective_gain(const UserGeometry& geom, double noise_mw);

/// A_g = min over the group's users of effective_gain.
Eigen::VectorXd worst_case_gains(const std::vector<GroupGeometry>& geometry,
                                 double noise_mw,
                                 AllocatorOpCount* count = nullptr);

struct PowerAllocation {
  Eigen::VectorXd power_mw;          // length G + 2: data powers then pilots
  double fairness_target = 0.0;      // t*, linear SINR
  Eigen::VectorXd worst_case_gains;  // A_g used to compute the allocation
  double data_budget_mw = 0.0;

  int n_groups() const { return static_cast<int>(worst_case_gains.size()); }
};

/// Closed form: t* = budget / sum_g(1/A_g), p_g = t*/A_g. All SINR
/// constraints and the budget are active at the optimum. Pilot entries are
/// appended at the mean data power.
PowerAllocation mmf_power_allocation(const Eigen::VectorXd& gains,
                                     double data_budget_mw,
                                     AllocatorOpCount* count = nullptr);

/// Data-symbol budget implied by the configured power convention and pilot
/// power policy.
double data_power_budget(const SystemConfig& cfg);

/// x_n = (1/sqrt(N)) U_n diag(sqrt(p)) s for n in [N].
std::vector<Eigen::VectorXcd> transmit_frame(const PrecoderBank& bank,
                                             const PowerAllocation& alloc,
                                             const SymbolFrame& frame);

/// Stacked reception: y_n = h^T x_n + z_n with z_n i.i.d. CN(0, sigma^2).
Eigen::VectorXcd receive_frame(const Eigen::VectorXcd& h,
                               const std::vector<Eigen::VectorXcd>& tx,
                               double noise_mw, Rng& rng);

/// e~^T conj(F_g) y with e~ the elementwise reciprocal of h_hat. With
/// h_hat = h and no noise this returns sqrt(N p_g) s_g exactly.
std::complex<double> combine(const Eigen::VectorXcd& y,
                             const PrecoderBank& bank, int g,
                             const Eigen::VectorXcd& h_hat);

/// Exact post-combining SINR N p_g / (sigma^2 ||e~||^2); reduces to
/// p_g |alpha|^2 / sigma^2 for a constant-modulus (pure LoS) channel.
double realized_sinr(const Eigen::VectorXcd& h, const PowerAllocation& alloc,
                     int g, double noise_mw);

/// SINR when combining with a mismatched channel estimate; residual leakage
/// from every other symbol slot counts as interference.
double realized_sinr_mismatched(const PrecoderBank& bank,
                                const Eigen::VectorXcd& h,
                                const Eigen::VectorXcd& h_hat,
                                const PowerAllocation& alloc, int g,
                                double noise_mw);

struct RateReport {
  Eigen::VectorXd worst_sinr;  // per group, linear
  Eigen::VectorXd group_rate;  // bits/s/Hz
  double mmf_rate = 0.0;
  RateNormalization normalization = RateNormalization::kPerSlot;
};

/// Allocation from large-scale gains only, realized SINR from the full
/// channels, group rate = factor * log2(1 + min_k SINR).
RateReport cf_mgm_mmf_rate(const ChannelSet& channels, const SystemConfig& cfg);

/// Finite-difference slope of a log-measure (e.g. log2(1 + t*)) against
/// log2(P_t) over [p_lo, p_hi].
double dof_estimate(const std::function<double(double)>& log_measure,
                    double p_lo_mw, double p_hi_mw);

}  // namespace cfmgm
