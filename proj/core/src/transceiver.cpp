#include "cfmgm/transceiver.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cfmgm {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

std::complex<double> row_dot(const Eigen::VectorXcd& a,
                             const Eigen::VectorXcd& b) {
  // Plain bilinear product a^T b (no conjugation).
  return (a.array() * b.array()).sum();
}

void require_nonzero_entries(const Eigen::VectorXcd& h, const char* where) {
  for (int i = 0; i < h.size(); ++i) {
    if (h(i) == std::complex<double>(0.0, 0.0)) {
      throw std::invalid_argument(std::string(where) +
                                  ": zero channel entry, equalizer undefined");
    }
  }
}

}  // namespace

SymbolFrame qpsk_frame(int n_groups, Rng& rng) {
  if (n_groups < 1) throw std::invalid_argument("qpsk_frame: n_groups >= 1");
  SymbolFrame frame;
  frame.constellation = "qpsk";
  frame.symbols = Eigen::VectorXcd(n_groups + 2);
  for (int g = 0; g < n_groups; ++g) {
    const double re = rng.uniform() < 0.5 ? -kInvSqrt2 : kInvSqrt2;
    const double im = rng.uniform() < 0.5 ? -kInvSqrt2 : kInvSqrt2;
    frame.symbols(g) = {re, im};
  }
  frame.symbols(n_groups) = {1.0, 0.0};
  frame.symbols(n_groups + 1) = {1.0, 0.0};
  return frame;
}

double effective_gain(const UserGeometry& geom, double noise_mw) {
  if (!(geom.distance > 0.0)) {
    throw std::invalid_argument("effective_gain: distance must be > 0");
  }
  if (!(noise_mw > 0.0)) {
    throw std::invalid_argument("effective_gain: noise power must be > 0");
  }
  return 1.0 / (geom.distance * geom.distance * noise_mw);
}

Eigen::VectorXd worst_case_gains(const std::vector<GroupGeometry>& geometry,
                                 double noise_mw, AllocatorOpCount* count) {
  if (geometry.empty()) {
    throw std::invalid_argument("worst_case_gains: no groups");
  }
  Eigen::VectorXd gains(static_cast<Eigen::Index>(geometry.size()));
  for (std::size_t g = 0; g < geometry.size(); ++g) {
    if (geometry[g].empty()) {
      throw std::invalid_argument("worst_case_gains: empty group");
    }
    double worst = std::numeric_limits<double>::infinity();
    for (const UserGeometry& geom : geometry[g]) {
      const double a = effective_gain(geom, noise_mw);
      if (count != nullptr) ++count->comparisons;
      if (a < worst) worst = a;
    }
    gains(static_cast<Eigen::Index>(g)) = worst;
  }
  return gains;
}

PowerAllocation mmf_power_allocation(const Eigen::VectorXd& gains,
                                     double data_budget_mw,
                                     AllocatorOpCount* count) {
  const Eigen::Index n_groups = gains.size();
  if (n_groups < 1) {
    throw std::invalid_argument("mmf_power_allocation: no groups");
  }
  for (Eigen::Index g = 0; g < n_groups; ++g) {
    if (!(gains(g) > 0.0)) {
      throw std::invalid_argument(
          "mmf_power_allocation: gains must be strictly positive");
    }
  }
  if (!(data_budget_mw > 0.0)) {
    throw std::invalid_argument("mmf_power_allocation: budget must be > 0");
  }

  // Pass 1: S = sum_g 1/A_g.
  if (count != nullptr) ++count->group_passes;
  double inv_gain_sum = 0.0;
  for (Eigen::Index g = 0; g < n_groups; ++g) {
    inv_gain_sum += 1.0 / gains(g);
  }
  const double target = data_budget_mw / inv_gain_sum;

  // Pass 2: scale p_g = t*/A_g.
  if (count != nullptr) ++count->group_passes;
  PowerAllocation alloc;
  alloc.power_mw = Eigen::VectorXd(n_groups + 2);
  double data_sum = 0.0;
  for (Eigen::Index g = 0; g < n_groups; ++g) {
    alloc.power_mw(g) = target / gains(g);
    data_sum += alloc.power_mw(g);
  }
  const double pilot_power = data_sum / static_cast<double>(n_groups);
  alloc.power_mw(n_groups) = pilot_power;
  alloc.power_mw(n_groups + 1) = pilot_power;
  alloc.fairness_target = target;
  alloc.worst_case_gains = gains;
  alloc.data_budget_mw = data_budget_mw;
  return alloc;
}

double data_power_budget(const SystemConfig& cfg) {
  double budget = cfg.tx_power_mw();
  if (cfg.power_convention == PowerConvention::kPerSlot) {
    budget *= static_cast<double>(cfg.n_antennas);
  }
  if (cfg.pilot_power_policy == PilotPowerPolicy::kFoldedIntoBudget) {
    budget *= static_cast<double>(cfg.n_groups) /
              static_cast<double>(cfg.n_groups + 2);
  }
  return budget;
}

std::vector<Eigen::VectorXcd> transmit_frame(const PrecoderBank& bank,
                                             const PowerAllocation& alloc,
                                             const SymbolFrame& frame) {
  const int n = bank.n;
  if (alloc.power_mw.size() != n || frame.symbols.size() != n) {
    throw std::invalid_argument("transmit_frame: dimension mismatch");
  }
  for (int i = 0; i < n; ++i) {
    if (alloc.power_mw(i) < 0.0) {
      throw std::invalid_argument("transmit_frame: negative symbol power");
    }
  }
  const Eigen::VectorXcd scaled =
      alloc.power_mw.cwiseSqrt().cast<std::complex<double>>().cwiseProduct(
          frame.symbols);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<Eigen::VectorXcd> tx;
  tx.reserve(static_cast<std::size_t>(n));
  for (int slot = 0; slot < n; ++slot) {
    tx.push_back(scale *
                 (bank.precoders[static_cast<std::size_t>(slot)] * scaled));
  }
  return tx;
}

Eigen::VectorXcd receive_frame(const Eigen::VectorXcd& h,
                               const std::vector<Eigen::VectorXcd>& tx,
                               double noise_mw, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(tx.size());
  Eigen::VectorXcd y(n);
  for (Eigen::Index slot = 0; slot < n; ++slot) {
    if (tx[static_cast<std::size_t>(slot)].size() != h.size()) {
      throw std::invalid_argument("receive_frame: dimension mismatch");
    }
    y(slot) = row_dot(h, tx[static_cast<std::size_t>(slot)]) +
              rng.complex_gaussian(noise_mw);
  }
  return y;
}

std::complex<double> combine(const Eigen::VectorXcd& y,
                             const PrecoderBank& bank, int g,
                             const Eigen::VectorXcd& h_hat) {
  if (g < 0 || g >= bank.n) {
    throw std::out_of_range("combine: group index out of range");
  }
  if (y.size() != bank.n || h_hat.size() != bank.n) {
    throw std::invalid_argument("combine: dimension mismatch");
  }
  require_nonzero_entries(h_hat, "combine");
  const Eigen::VectorXcd equalizer = h_hat.cwiseInverse();
  const Eigen::VectorXcd projected =
      bank.combiners[static_cast<std::size_t>(g)].conjugate() * y;
  return row_dot(equalizer, projected);
}

double realized_sinr(const Eigen::VectorXcd& h, const PowerAllocation& alloc,
                     int g, double noise_mw) {
  if (g < 0 || g >= alloc.power_mw.size()) {
    throw std::out_of_range("realized_sinr: symbol index out of range");
  }
  if (!(noise_mw > 0.0)) {
    throw std::invalid_argument("realized_sinr: noise power must be > 0");
  }
  require_nonzero_entries(h, "realized_sinr");
  const double equalizer_norm2 = h.cwiseAbs2().cwiseInverse().sum();
  const double n = static_cast<double>(h.size());
  return n * alloc.power_mw(g) / (noise_mw * equalizer_norm2);
}

double realized_sinr_mismatched(const PrecoderBank& bank,
                                const Eigen::VectorXcd& h,
                                const Eigen::VectorXcd& h_hat,
                                const PowerAllocation& alloc, int g,
                                double noise_mw) {
  if (g < 0 || g >= bank.n) {
    throw std::out_of_range("realized_sinr_mismatched: index out of range");
  }
  if (h.size() != bank.n || h_hat.size() != bank.n ||
      alloc.power_mw.size() != bank.n) {
    throw std::invalid_argument("realized_sinr_mismatched: dimension mismatch");
  }
  require_nonzero_entries(h_hat, "realized_sinr_mismatched");
  const Eigen::VectorXcd equalizer = h_hat.cwiseInverse();
  const double equalizer_norm2 = equalizer.cwiseAbs2().sum();
  const double n = static_cast<double>(bank.n);

  double signal = 0.0;
  double leakage = 0.0;
  const Eigen::MatrixXcd own_conj =
      bank.combiners[static_cast<std::size_t>(g)].conjugate();
  for (int slot_symbol = 0; slot_symbol < bank.n; ++slot_symbol) {
    const Eigen::VectorXcd projected =
        own_conj *
        (bank.combiners[static_cast<std::size_t>(slot_symbol)].transpose() * h);
    const std::complex<double> coeff = row_dot(equalizer, projected);
    const double term = alloc.power_mw(slot_symbol) * std::norm(coeff) / n;
    if (slot_symbol == g) {
      signal = term;
    } else {
      leakage += term;
    }
  }
  return signal / (leakage + noise_mw * equalizer_norm2);
}

RateReport cf_mgm_mmf_rate(const ChannelSet& channels,
                           const SystemConfig& cfg) {
  const int n = cfg.n_antennas;
  const int n_groups = cfg.n_groups;
  if (n != n_groups + 2) {
    throw std::invalid_argument("cf_mgm_mmf_rate: requires N == G + 2");
  }
  if (channels.n_antennas != n ||
      static_cast<int>(channels.groups.size()) != n_groups) {
    throw std::invalid_argument("cf_mgm_mmf_rate: channel/config mismatch");
  }

  const double noise = cfg.noise_mw();
  const Eigen::VectorXd gains =
      worst_case_gains(geometries_of(channels), noise);
  const PowerAllocation alloc =
      mmf_power_allocation(gains, data_power_budget(cfg));

  const bool with_csir_error = cfg.csir_error_rel_var > 0.0;
  PrecoderBank bank;
  Rng csir_rng(derive_seed(channels.master_seed, channels.trial_index,
                           StreamTag::kCsir));
  if (with_csir_error) bank = build_precoder_bank(n);

  RateReport report;
  report.normalization = cfg.rate_normalization;
  report.worst_sinr = Eigen::VectorXd(n_groups);
  report.group_rate = Eigen::VectorXd(n_groups);
  const double factor =
      cfg.rate_normalization == RateNormalization::kPerSlot
          ? 1.0 / static_cast<double>(n)
          : 1.0;

  double mmf = std::numeric_limits<double>::infinity();
  for (int g = 0; g < n_groups; ++g) {
    double worst = std::numeric_limits<double>::infinity();
    for (const UserChannel& user : channels.groups[static_cast<std::size_t>(g)]) {
      double sinr;
      if (with_csir_error) {
        Eigen::VectorXcd h_hat = user.h;
        for (int i = 0; i < n; ++i) {
          h_hat(i) += user.h(i) * csir_rng.complex_gaussian(cfg.csir_error_rel_var);
        }
        sinr = realized_sinr_mismatched(bank, user.h, h_hat, alloc, g, noise);
      } else {
        sinr = realized_sinr(user.h, alloc, g, noise);
      }
      worst = std::min(worst, sinr);
    }
    report.worst_sinr(g) = worst;
    report.group_rate(g) = factor * std::log2(1.0 + worst);
    mmf = std::min(mmf, report.group_rate(g));
  }
  report.mmf_rate = mmf;
  return report;
}

double dof_estimate(const std::function<double(double)>& log_measure,
                    double p_lo_mw, double p_hi_mw) {
  if (!(p_lo_mw > 0.0) || !(p_hi_mw > p_lo_mw)) {
    throw std::invalid_argument(
        "dof_estimate: window must satisfy 0 < p_lo < p_hi");
  }
  const double d_measure = log_measure(p_hi_mw) - log_measure(p_lo_mw);
  const double d_log_power = std::log2(p_hi_mw) - std::log2(p_lo_mw);
  return d_measure / d_log_power;
}

}  // namespace cfmgm
