#include "cfmgm/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "cfmgm/channel.hpp"
#include "cfmgm/transceiver.hpp"

namespace cfmgm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

TdScheme td_scheme_of(Scheme scheme) {
  return scheme == Scheme::kMrt ? TdScheme::kMrt : TdScheme::kSca;
}

/// Runs fn(i) for i in [0, n) on up to `workers` threads. Each index writes
/// only its own slot, so results do not depend on the thread count.
template <typename Fn>
void parallel_for_indexed(int n, int workers, Fn&& fn) {
  if (workers <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  const int count = std::min(workers, n);
  pool.reserve(static_cast<std::size_t>(count));
  for (int t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

}  // namespace

std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::kCfMgm: return "cf-mgm";
    case Scheme::kMrt: return "mrt";
    case Scheme::kSca: return "sca";
    case Scheme::kNoop: return "noop";
  }
  throw std::invalid_argument("to_string: bad scheme");
}

Scheme scheme_from_string(const std::string& name) {
  if (name == "cf-mgm") return Scheme::kCfMgm;
  if (name == "mrt") return Scheme::kMrt;
  if (name == "sca") return Scheme::kSca;
  if (name == "noop") return Scheme::kNoop;
  throw std::invalid_argument("unknown scheme: " + name);
}

std::string to_string(SweepParameter parameter) {
  switch (parameter) {
    case SweepParameter::kNone: return "none";
    case SweepParameter::kUsersPerGroup: return "users-per-group";
    case SweepParameter::kKappaDb: return "kappa-db";
    case SweepParameter::kTxPowerDbm: return "txpower-dbm";
  }
  throw std::invalid_argument("to_string: bad sweep parameter");
}

SweepParameter sweep_parameter_from_string(const std::string& name) {
  if (name == "none") return SweepParameter::kNone;
  if (name == "users-per-group") return SweepParameter::kUsersPerGroup;
  if (name == "kappa-db") return SweepParameter::kKappaDb;
  if (name == "txpower-dbm") return SweepParameter::kTxPowerDbm;
  throw std::invalid_argument("unknown sweep parameter: " + name);
}

SystemConfig apply_sweep_value(SystemConfig cfg, SweepParameter parameter,
                               double value) {
  switch (parameter) {
    case SweepParameter::kNone:
      break;
    case SweepParameter::kUsersPerGroup: {
      const int users = static_cast<int>(std::llround(value));
      if (users < 1 || std::abs(value - users) > 1e-9) {
        throw std::invalid_argument(
            "users-per-group sweep values must be positive integers");
      }
      cfg = with_users_per_group(std::move(cfg), users);
      break;
    }
    case SweepParameter::kKappaDb:
      cfg.rician_kappa_db = value;
      break;
    case SweepParameter::kTxPowerDbm:
      cfg.tx_power_dbm = value;
      break;
  }
  return cfg;
}

TrialResult run_trial(const SystemConfig& cfg, int trial_index,
                      const std::vector<Scheme>& schemes,
                      const ScaOptions& sca_opts, bool measure_time) {
  TrialResult result;
  result.trial_index = trial_index;
  const ChannelSet channels =
      make_channel_set(cfg, static_cast<std::uint64_t>(trial_index));
  const double noise = cfg.noise_mw();
  const double p_slot = cfg.tx_power_mw();

  for (Scheme scheme : schemes) {
    SchemeResult sr;
    try {
      switch (scheme) {
        case Scheme::kCfMgm: {
          const auto start = Clock::now();
          const auto gains = worst_case_gains(geometries_of(channels), noise);
          const auto alloc =
              mmf_power_allocation(gains, data_power_budget(cfg));
          if (measure_time) sr.decision_time_s = seconds_since(start);
          (void)alloc;
          const RateReport report = cf_mgm_mmf_rate(channels, cfg);
          sr.mmf_rate = report.mmf_rate;
          sr.group_rates = report.group_rate;
          break;
        }
        case Scheme::kMrt:
        case Scheme::kSca: {
          const auto schedule = time_division_schedule(
              cfg.users_per_group, cfg.n_antennas,
              derive_seed(cfg.master_seed,
                          static_cast<std::uint64_t>(trial_index),
                          StreamTag::kSchedule));
          Rng sca_rng(derive_seed(cfg.master_seed,
                                  static_cast<std::uint64_t>(trial_index),
                                  StreamTag::kSca));
          const auto start = Clock::now();
          const auto decisions =
              td_beamforming_decisions(td_scheme_of(scheme), channels, schedule,
                                       p_slot, noise, sca_opts, sca_rng);
          if (measure_time) sr.decision_time_s = seconds_since(start);
          const RateReport report = td_rates_from_decisions(
              channels, schedule, decisions, noise, cfg.rate_normalization);
          sr.mmf_rate = report.mmf_rate;
          sr.group_rates = report.group_rate;
          break;
        }
        case Scheme::kNoop: {
          const auto start = Clock::now();
          if (measure_time) sr.decision_time_s = seconds_since(start);
          sr.mmf_rate = kNoopConstantRate;
          sr.group_rates =
              Eigen::VectorXd::Constant(cfg.n_groups, kNoopConstantRate);
          break;
        }
      }
    } catch (const std::exception& e) {
      sr.failed = true;
      sr.error = e.what();
      sr.mmf_rate = std::numeric_limits<double>::quiet_NaN();
      sr.group_rates = Eigen::VectorXd::Constant(
          cfg.n_groups, std::numeric_limits<double>::quiet_NaN());
    }
    result.schemes.emplace(scheme, std::move(sr));
  }
  return result;
}

void SweepSpec::validate() const {
  if (values.empty()) {
    throw std::invalid_argument("SweepSpec: value list must be nonempty");
  }
  if (schemes.empty()) {
    throw std::invalid_argument("SweepSpec: scheme list must be nonempty");
  }
  const bool cf_enabled =
      std::find(schemes.begin(), schemes.end(), Scheme::kCfMgm) != schemes.end();
  for (double value : values) {
    apply_sweep_value(base, parameter, value).validate(cf_enabled);
  }
  if (trials_per_point < 0) {
    throw std::invalid_argument("SweepSpec: trials_per_point must be >= 0");
  }
}

std::vector<AggregatePoint> aggregate_records(
    const std::vector<RawRecord>& raw, const std::vector<Scheme>& schemes,
    SweepParameter parameter, const std::vector<double>& values) {
  std::vector<AggregatePoint> points;
  for (Scheme scheme : schemes) {
    for (double value : values) {
      AggregatePoint point;
      point.scheme = scheme;
      point.parameter = parameter;
      point.sweep_value = value;
      double sum = 0.0;
      std::vector<double> included;
      for (const RawRecord& rec : raw) {
        if (rec.scheme != scheme || rec.sweep_value != value) continue;
        if (std::isnan(rec.mmf_rate)) {
          ++point.n_excluded;
          continue;
        }
        included.push_back(rec.mmf_rate);
        sum += rec.mmf_rate;
      }
      point.n_trials = static_cast<int>(included.size());
      if (point.n_trials > 0) {
        point.mean = sum / point.n_trials;
        if (point.n_trials > 1) {
          double ss = 0.0;
          for (double rate : included) {
            ss += (rate - point.mean) * (rate - point.mean);
          }
          const double sd = std::sqrt(ss / (point.n_trials - 1));
          point.std_err = sd / std::sqrt(static_cast<double>(point.n_trials));
        }
        point.ci95_lo = point.mean - 1.96 * point.std_err;
        point.ci95_hi = point.mean + 1.96 * point.std_err;
      }
      points.push_back(point);
    }
  }
  return points;
}

SweepResult run_sweep(const SweepSpec& spec, int workers) {
  spec.validate();
  const int worker_count =
      workers > 0 ? workers
                  : std::max(1u, std::thread::hardware_concurrency());
  const bool cf_enabled = std::find(spec.schemes.begin(), spec.schemes.end(),
                                    Scheme::kCfMgm) != spec.schemes.end();

  SweepResult result;
  for (double value : spec.values) {
    const SystemConfig cfg = apply_sweep_value(spec.base, spec.parameter, value);
    cfg.validate(cf_enabled);
    const int trials =
        spec.trials_per_point > 0 ? spec.trials_per_point : cfg.n_trials;

    std::vector<TrialResult> trials_out(static_cast<std::size_t>(trials));
    parallel_for_indexed(trials, worker_count, [&](int trial) {
      trials_out[static_cast<std::size_t>(trial)] = run_trial(
          cfg, trial, spec.schemes, spec.sca, spec.measure_time);
    });

    // Aggregation order is fixed by trial index regardless of concurrency.
    for (int trial = 0; trial < trials; ++trial) {
      const TrialResult& tr = trials_out[static_cast<std::size_t>(trial)];
      for (Scheme scheme : spec.schemes) {
        const SchemeResult& sr = tr.schemes.at(scheme);
        result.raw.push_back(RawRecord{trial, scheme, spec.parameter, value,
                                       sr.mmf_rate, sr.decision_time_s});
      }
    }
  }
  result.aggregate =
      aggregate_records(result.raw, spec.schemes, spec.parameter, spec.values);
  return result;
}

std::vector<TimingRow> runtime_benchmark(
    const SystemConfig& cfg, const std::vector<int>& users_per_group_values,
    const std::vector<Scheme>& schemes, const ScaOptions& sca_opts) {
  std::vector<TimingRow> rows;
  for (int users : users_per_group_values) {
    const SystemConfig cfg_k = with_users_per_group(cfg, users);
    cfg_k.validate(std::find(schemes.begin(), schemes.end(), Scheme::kCfMgm) !=
                   schemes.end());
    const ChannelSet channels = make_channel_set(cfg_k, 0);
    const auto geometry = geometries_of(channels);
    const auto schedule = time_division_schedule(
        cfg_k.users_per_group, cfg_k.n_antennas,
        derive_seed(cfg_k.master_seed, 0, StreamTag::kSchedule));
    const double noise = cfg_k.noise_mw();
    const double p_slot = cfg_k.tx_power_mw();

    for (Scheme scheme : schemes) {
      auto decision = [&]() {
        switch (scheme) {
          case Scheme::kCfMgm: {
            const auto gains = worst_case_gains(geometry, noise);
            const auto alloc =
                mmf_power_allocation(gains, data_power_budget(cfg_k));
            (void)alloc;
            break;
          }
          case Scheme::kMrt:
          case Scheme::kSca: {
            Rng rng(derive_seed(cfg_k.master_seed, 0, StreamTag::kSca));
            const auto decisions = td_beamforming_decisions(
                td_scheme_of(scheme), channels, schedule, p_slot, noise,
                sca_opts, rng);
            (void)decisions;
            break;
          }
          case Scheme::kNoop:
            break;
        }
      };

      decision();  // warmup
      constexpr int kMeasurements = 5;
      std::vector<double> per_call(kMeasurements);
      for (int m = 0; m < kMeasurements; ++m) {
        int batch = 1;
        double elapsed = 0.0;
        for (;;) {
          const auto start = Clock::now();
          for (int b = 0; b < batch; ++b) decision();
          elapsed = seconds_since(start);
          if (elapsed >= 2e-3 || batch >= (1 << 20)) break;
          const double scale =
              elapsed > 0.0 ? std::min(1024.0, 2.5e-3 / elapsed) : 1024.0;
          batch = std::max(batch * 2, static_cast<int>(batch * scale));
        }
        per_call[static_cast<std::size_t>(m)] = elapsed / batch;
      }
      std::vector<double> sorted = per_call;
      std::sort(sorted.begin(), sorted.end());
      double mean = 0.0;
      for (double t : per_call) mean += t;
      mean /= kMeasurements;
      rows.push_back(TimingRow{scheme, users, sorted[kMeasurements / 2], mean,
                               kMeasurements});
    }
  }
  return rows;
}

}  // namespace cfmgm
