#include "cfmgm/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace cfmgm {

namespace {

constexpr double kFixedPointStopDelta = 1e-10;
constexpr int kMaxFixedPointIters = 10000;
constexpr double kBisectionRelTol = 1e-6;
constexpr int kMaxBisectionIters = 200;
constexpr double kLn2 = 0.69314718055994530942;

std::complex<double> row_dot(const Eigen::VectorXcd& a,
                             const Eigen::VectorXcd& b) {
  return (a.array() * b.array()).sum();
}

void check_served(const std::vector<std::vector<Eigen::VectorXcd>>& served) {
  if (served.empty()) {
    throw std::invalid_argument("baselines: no groups to serve");
  }
  for (const auto& group : served) {
    if (group.empty()) {
      throw std::invalid_argument("baselines: empty served set for a group");
    }
  }
}

}  // namespace

double BeamformerSet::total_power_mw() const {
  double total = 0.0;
  for (const auto& w : beams) total += w.squaredNorm();
  return total;
}

double conventional_sinr(const Eigen::VectorXcd& h, const BeamformerSet& beams,
                         int g, double noise_mw) {
  if (g < 0 || g >= static_cast<int>(beams.beams.size())) {
    throw std::out_of_range("conventional_sinr: group index out of range");
  }
  double signal = 0.0;
  double interference = 0.0;
  for (int gp = 0; gp < static_cast<int>(beams.beams.size()); ++gp) {
    const auto& w = beams.beams[static_cast<std::size_t>(gp)];
    if (w.size() == 0) continue;  // inactive group
    if (w.size() != h.size()) {
      throw std::invalid_argument("conventional_sinr: dimension mismatch");
    }
    const double power = std::norm(row_dot(h, w));
    if (gp == g) {
      signal = power;
    } else {
      interference += power;
    }
  }
  return signal / (interference + noise_mw);
}

std::vector<Eigen::VectorXcd> mrt_beamformers(
    const std::vector<std::vector<Eigen::VectorXcd>>& served) {
  check_served(served);
  std::vector<Eigen::VectorXcd> directions;
  directions.reserve(served.size());
  for (const auto& group : served) {
    Eigen::VectorXcd sum = Eigen::VectorXcd::Zero(group.front().size());
    double max_norm = 0.0;
    for (const auto& h : group) {
      sum += h;
      max_norm = std::max(max_norm, h.norm());
    }
    if (sum.norm() <= 1e-12 * max_norm) {
      // Degenerate channel sum; a zero beam would nullify the slot.
      const auto& fallback = group.front();
      if (fallback.norm() == 0.0) {
        throw std::invalid_argument("mrt_beamformers: all-zero user channel");
      }
      directions.push_back(fallback / fallback.norm());
    } else {
      directions.push_back(sum / sum.norm());
    }
  }
  return directions;
}

GainTable GainTable::build(
    const std::vector<Eigen::VectorXcd>& directions,
    const std::vector<std::vector<Eigen::VectorXcd>>& served) {
  check_served(served);
  if (directions.size() != served.size()) {
    throw std::invalid_argument("GainTable: direction/group count mismatch");
  }
  const int n_groups = static_cast<int>(served.size());
  GainTable table;
  table.rows.reserve(served.size());
  for (int g = 0; g < n_groups; ++g) {
    const auto& group = served[static_cast<std::size_t>(g)];
    Eigen::MatrixXd row(static_cast<Eigen::Index>(group.size()), n_groups);
    for (std::size_t k = 0; k < group.size(); ++k) {
      for (int gp = 0; gp < n_groups; ++gp) {
        row(static_cast<Eigen::Index>(k), gp) = std::norm(
            row_dot(group[k], directions[static_cast<std::size_t>(gp)]));
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

bool power_target_feasible(double target, const GainTable& gains,
                           double noise_mw, double p_t_mw,
                           Eigen::VectorXd* powers_out) {
  const int n_groups = static_cast<int>(gains.rows.size());
  Eigen::VectorXd q = Eigen::VectorXd::Zero(n_groups);
  if (target <= 0.0) {
    if (powers_out != nullptr) *powers_out = q;
    return true;
  }
  Eigen::VectorXd q_next(n_groups);
  for (int iter = 0; iter < kMaxFixedPointIters; ++iter) {
    for (int g = 0; g < n_groups; ++g) {
      const Eigen::MatrixXd& row = gains.rows[static_cast<std::size_t>(g)];
      double required = 0.0;
      for (Eigen::Index k = 0; k < row.rows(); ++k) {
        const double direct = row(k, g);
        if (direct <= 0.0) return false;
        double interference = 0.0;
        for (int gp = 0; gp < n_groups; ++gp) {
          if (gp != g) interference += row(k, gp) * q(gp);
        }
        required = std::max(required, (noise_mw + interference) / direct);
      }
      q_next(g) = target * required;
      // Standard interference function: the iterate from q = 0 never
      // decreases componentwise.
      if (q_next(g) < q(g) - 1e-9 * std::max(1.0, q(g))) {
        throw std::logic_error(
            "power_target_feasible: fixed-point iterate decreased");
      }
    }
    if (q_next.sum() > p_t_mw * (1.0 + 1e-12)) return false;
    const double delta = (q_next - q).cwiseAbs().maxCoeff();
    q = q_next;
    if (delta < kFixedPointStopDelta) {
      if (powers_out != nullptr) *powers_out = q;
      return true;
    }
  }
  return false;  // no convergence within the iteration cap
}

PowerControlResult maxmin_power_control(
    const std::vector<Eigen::VectorXcd>& directions,
    const std::vector<std::vector<Eigen::VectorXcd>>& served, double p_t_mw,
    double noise_mw) {
  if (!(p_t_mw > 0.0) || !(noise_mw > 0.0)) {
    throw std::invalid_argument("maxmin_power_control: powers must be > 0");
  }
  const GainTable gains = GainTable::build(directions, served);
  const int n_groups = static_cast<int>(gains.rows.size());

  PowerControlResult result;
  result.powers_mw = Eigen::VectorXd::Zero(n_groups);

  // A served user with no gain along its own beam pins the max-min target
  // at zero.
  double hi = std::numeric_limits<double>::infinity();
  for (int g = 0; g < n_groups; ++g) {
    const double direct_min =
        gains.rows[static_cast<std::size_t>(g)].col(g).minCoeff();
    if (direct_min <= 0.0) {
      result.zero_gain = true;
      result.target = 0.0;
      return result;
    }
    hi = std::min(hi, p_t_mw * direct_min / noise_mw);
  }

  Eigen::VectorXd q(n_groups);
  if (power_target_feasible(hi, gains, noise_mw, p_t_mw, &q)) {
    result.powers_mw = q;
    result.target = hi;
    return result;
  }

  double lo = 0.0;
  Eigen::VectorXd q_best = Eigen::VectorXd::Zero(n_groups);
  for (int iter = 0; iter < kMaxBisectionIters; ++iter) {
    if (lo > 0.0 && (hi - lo) <= kBisectionRelTol * lo) break;
    const double mid = 0.5 * (lo + hi);
    if (power_target_feasible(mid, gains, noise_mw, p_t_mw, &q)) {
      lo = mid;
      q_best = q;
    } else {
      hi = mid;
    }
  }
  result.powers_mw = q_best;
  result.target = lo;
  return result;
}

namespace {

struct FlatUser {
  int group;
  const Eigen::VectorXcd* h;
};

struct ScaProblem {
  std::vector<FlatUser> users;
  Eigen::MatrixXcd h_rows;  // users x antennas
  int n_groups = 0;
  int n_antennas = 0;
  double noise_mw = 0.0;
};

ScaProblem make_sca_problem(
    const std::vector<std::vector<Eigen::VectorXcd>>& served, double noise_mw) {
  ScaProblem prob;
  prob.n_groups = static_cast<int>(served.size());
  prob.n_antennas = static_cast<int>(served.front().front().size());
  prob.noise_mw = noise_mw;
  for (int g = 0; g < prob.n_groups; ++g) {
    for (const auto& h : served[static_cast<std::size_t>(g)]) {
      if (h.size() != prob.n_antennas) {
        throw std::invalid_argument("sca_mmf_beamforming: channel length mismatch");
      }
      prob.users.push_back({g, &h});
    }
  }
  prob.h_rows = Eigen::MatrixXcd(static_cast<Eigen::Index>(prob.users.size()),
                                 prob.n_antennas);
  for (std::size_t u = 0; u < prob.users.size(); ++u) {
    prob.h_rows.row(static_cast<Eigen::Index>(u)) = prob.users[u].h->transpose();
  }
  return prob;
}

struct ScaEval {
  Eigen::VectorXd rates;     // per user, bits/slot
  Eigen::MatrixXcd v;        // users x groups, h^T w
  Eigen::VectorXd signal;    // |v_{u,g_u}|^2
  Eigen::VectorXd interf;    // noise + out-of-group power
  double min_rate = 0.0;
  double smoothed = 0.0;     // log-sum-exp softmin at the given tau
};

ScaEval evaluate(const ScaProblem& prob, const Eigen::MatrixXcd& w,
                 double tau) {
  ScaEval eval;
  eval.v = prob.h_rows * w;
  const auto n_users = static_cast<Eigen::Index>(prob.users.size());
  eval.rates = Eigen::VectorXd(n_users);
  eval.signal = Eigen::VectorXd(n_users);
  eval.interf = Eigen::VectorXd(n_users);
  for (Eigen::Index u = 0; u < n_users; ++u) {
    const int g = prob.users[static_cast<std::size_t>(u)].group;
    double total = prob.noise_mw;
    for (int gp = 0; gp < prob.n_groups; ++gp) {
      if (gp != g) total += std::norm(eval.v(u, gp));
    }
    eval.signal(u) = std::norm(eval.v(u, g));
    eval.interf(u) = total;
    eval.rates(u) = std::log2(1.0 + eval.signal(u) / total);
  }
  eval.min_rate = eval.rates.minCoeff();
  double exp_sum = 0.0;
  for (Eigen::Index u = 0; u < n_users; ++u) {
    exp_sum += std::exp(-(eval.rates(u) - eval.min_rate) / tau);
  }
  eval.smoothed = eval.min_rate - tau * std::log(exp_sum);
  return eval;
}

Eigen::MatrixXcd gradient(const ScaProblem& prob, const ScaEval& eval,
                          double tau) {
  const auto n_users = static_cast<Eigen::Index>(prob.users.size());
  Eigen::VectorXd weights(n_users);
  double weight_sum = 0.0;
  for (Eigen::Index u = 0; u < n_users; ++u) {
    weights(u) = std::exp(-(eval.rates(u) - eval.min_rate) / tau);
    weight_sum += weights(u);
  }
  weights /= weight_sum;

  // coeff(u, g') of the Wirtinger derivative d rate_u / d w_{g'}^*:
  //   own group:  beta / I * v_{u,g}
  //   other g':  -beta * S / I^2 * v_{u,g'}
  Eigen::MatrixXcd coeff(n_users, prob.n_groups);
  for (Eigen::Index u = 0; u < n_users; ++u) {
    const int g = prob.users[static_cast<std::size_t>(u)].group;
    const double beta =
        weights(u) / (kLn2 * (1.0 + eval.signal(u) / eval.interf(u)));
    const double cross = -beta * eval.signal(u) / (eval.interf(u) * eval.interf(u));
    for (int gp = 0; gp < prob.n_groups; ++gp) {
      coeff(u, gp) = cross * eval.v(u, gp);
    }
    coeff(u, g) = beta / eval.interf(u) * eval.v(u, g);
  }
  return prob.h_rows.adjoint() * coeff;  // = sum_u conj(h_u) coeff(u, :)
}

Eigen::MatrixXcd project_power(Eigen::MatrixXcd w, double p_t_mw) {
  const double total = w.squaredNorm();
  if (total > p_t_mw) {
    w *= std::sqrt(p_t_mw / total);
  }
  return w;
}

}  // namespace

ScaResult sca_mmf_beamforming(
    const std::vector<std::vector<Eigen::VectorXcd>>& served, double p_t_mw,
    double noise_mw, const ScaOptions& opts, Rng& rng) {
  if (!(p_t_mw > 0.0) || !(noise_mw > 0.0)) {
    throw std::invalid_argument("sca_mmf_beamforming: powers must be > 0");
  }
  check_served(served);
  const ScaProblem prob = make_sca_problem(served, noise_mw);
  const auto mrt_dirs = mrt_beamformers(served);

  ScaResult best;
  best.min_rate = -std::numeric_limits<double>::infinity();

  for (int restart = 0; restart < std::max(1, opts.restarts); ++restart) {
    Eigen::MatrixXcd w(prob.n_antennas, prob.n_groups);
    const double per_group = std::sqrt(p_t_mw / prob.n_groups);
    for (int g = 0; g < prob.n_groups; ++g) {
      Eigen::VectorXcd dir = mrt_dirs[static_cast<std::size_t>(g)];
      if (restart > 0) {
        for (int i = 0; i < prob.n_antennas; ++i) {
          dir(i) += opts.init_perturbation *
                    rng.complex_gaussian(1.0 / prob.n_antennas);
        }
        dir /= dir.norm();
      }
      w.col(g) = per_group * dir;
    }

    double tau = opts.tau;
    ScaEval eval = evaluate(prob, w, tau);
    double step = 0.0;
    bool exhausted = false;
    std::vector<ScaTracePoint> trace;

    int iter = 0;
    while (iter < opts.max_iters) {
      ++iter;
      if (opts.anneal_period > 0 && iter % opts.anneal_period == 0 &&
          tau > opts.tau_floor) {
        tau = std::max(opts.tau_floor, tau * opts.anneal_factor);
        eval = evaluate(prob, w, tau);
      }

      const Eigen::MatrixXcd grad = gradient(prob, eval, tau);
      const double grad_norm = grad.norm();
      if (grad_norm == 0.0) break;
      if (step <= 0.0) {
        step = 0.1 * (w.norm() + 1e-30) / grad_norm;
      }

      bool accepted = false;
      double mu = step;
      for (int bt = 0; bt < 60; ++bt) {
        const Eigen::MatrixXcd w_cand = project_power(w + mu * grad, p_t_mw);
        const ScaEval cand = evaluate(prob, w_cand, tau);
        if (cand.smoothed >
            eval.smoothed + 1e-12 * std::abs(eval.smoothed) + 1e-15) {
          w = w_cand;
          eval = cand;
          accepted = true;
          step = mu * opts.step_grow;
          trace.push_back({iter, tau, eval.smoothed});
          break;
        }
        mu *= opts.step_shrink;
      }
      if (!accepted) {
        if (tau <= opts.tau_floor * (1.0 + 1e-12)) break;  // converged/stalled
        tau = std::max(opts.tau_floor, tau * opts.anneal_factor);
        eval = evaluate(prob, w, tau);
      }
      if (iter == opts.max_iters) exhausted = true;
    }

    const ScaEval final_eval = evaluate(prob, w, tau);
    if (final_eval.min_rate > best.min_rate) {
      best.min_rate = final_eval.min_rate;
      best.smoothed_objective = final_eval.smoothed;
      best.beams.beams.clear();
      for (int g = 0; g < prob.n_groups; ++g) {
        best.beams.beams.push_back(w.col(g));
      }
      best.iteration_budget_exhausted = exhausted;
      best.trace = std::move(trace);
    }
  }
  return best;
}

SlotSchedule time_division_schedule(const std::vector<int>& group_sizes,
                                    int n_slots, std::uint64_t seed) {
  if (n_slots < 1) {
    throw std::invalid_argument("time_division_schedule: n_slots must be >= 1");
  }
  for (int size : group_sizes) {
    if (size < 1) {
      throw std::invalid_argument(
          "time_division_schedule: every group needs at least one user");
    }
  }
  Rng rng(seed);
  SlotSchedule schedule;
  schedule.slots.assign(
      static_cast<std::size_t>(n_slots),
      std::vector<std::vector<int>>(group_sizes.size()));
  for (std::size_t g = 0; g < group_sizes.size(); ++g) {
    std::vector<int> perm(static_cast<std::size_t>(group_sizes[g]));
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = static_cast<int>(perm.size()) - 1; i > 0; --i) {
      const int j = static_cast<int>(rng.uniform() * (i + 1));
      std::swap(perm[static_cast<std::size_t>(i)],
                perm[static_cast<std::size_t>(std::min(j, i))]);
    }
    for (std::size_t pos = 0; pos < perm.size(); ++pos) {
      schedule.slots[pos % static_cast<std::size_t>(n_slots)][g].push_back(
          perm[pos]);
    }
  }
  return schedule;
}

TdDecisions td_beamforming_decisions(TdScheme scheme,
                                     const ChannelSet& channels,
                                     const SlotSchedule& schedule,
                                     double p_slot_mw, double noise_mw,
                                     const ScaOptions& sca_opts, Rng& rng) {
  const int n_groups = static_cast<int>(channels.groups.size());
  TdDecisions decisions;
  decisions.per_slot.reserve(schedule.slots.size());

  for (const auto& slot : schedule.slots) {
    if (static_cast<int>(slot.size()) != n_groups) {
      throw std::invalid_argument("td_beamforming_decisions: schedule mismatch");
    }
    std::vector<int> active;
    std::vector<std::vector<Eigen::VectorXcd>> served;
    for (int g = 0; g < n_groups; ++g) {
      if (slot[static_cast<std::size_t>(g)].empty()) continue;
      active.push_back(g);
      std::vector<Eigen::VectorXcd> users;
      users.reserve(slot[static_cast<std::size_t>(g)].size());
      for (int k : slot[static_cast<std::size_t>(g)]) {
        users.push_back(
            channels.groups[static_cast<std::size_t>(g)][static_cast<std::size_t>(k)].h);
      }
      served.push_back(std::move(users));
    }

    BeamformerSet slot_beams;
    slot_beams.beams.assign(static_cast<std::size_t>(n_groups),
                            Eigen::VectorXcd());
    if (!active.empty()) {
      if (scheme == TdScheme::kMrt) {
        const auto directions = mrt_beamformers(served);
        const auto control =
            maxmin_power_control(directions, served, p_slot_mw, noise_mw);
        for (std::size_t a = 0; a < active.size(); ++a) {
          slot_beams.beams[static_cast<std::size_t>(active[a])] =
              std::sqrt(control.powers_mw(static_cast<Eigen::Index>(a))) *
              directions[a];
        }
      } else {
        const auto result =
            sca_mmf_beamforming(served, p_slot_mw, noise_mw, sca_opts, rng);
        for (std::size_t a = 0; a < active.size(); ++a) {
          slot_beams.beams[static_cast<std::size_t>(active[a])] =
              result.beams.beams[a];
        }
      }
    }
    decisions.per_slot.push_back(std::move(slot_beams));
  }
  return decisions;
}

RateReport td_rates_from_decisions(const ChannelSet& channels,
                                   const SlotSchedule& schedule,
                                   const TdDecisions& decisions,
                                   double noise_mw, RateNormalization norm) {
  const int n_groups = static_cast<int>(channels.groups.size());
  const int n_slots = schedule.n_slots();
  if (static_cast<int>(decisions.per_slot.size()) != n_slots) {
    throw std::invalid_argument("td_rates_from_decisions: decision count mismatch");
  }
  const double factor = norm == RateNormalization::kPerSlot
                            ? 1.0 / static_cast<double>(n_slots)
                            : 1.0;

  RateReport report;
  report.normalization = norm;
  report.worst_sinr =
      Eigen::VectorXd::Constant(n_groups, std::numeric_limits<double>::infinity());
  Eigen::VectorXd group_rate_sum = Eigen::VectorXd::Zero(n_groups);
  double slot_min_sum = 0.0;

  for (int slot = 0; slot < n_slots; ++slot) {
    const auto& beams = decisions.per_slot[static_cast<std::size_t>(slot)];
    double slot_min_rate = std::numeric_limits<double>::infinity();
    bool any_active = false;
    for (int g = 0; g < n_groups; ++g) {
      const auto& users = schedule.slots[static_cast<std::size_t>(slot)]
                                        [static_cast<std::size_t>(g)];
      if (users.empty()) continue;
      any_active = true;
      double worst = std::numeric_limits<double>::infinity();
      for (int k : users) {
        const auto& h =
            channels.groups[static_cast<std::size_t>(g)][static_cast<std::size_t>(k)].h;
        worst = std::min(worst, conventional_sinr(h, beams, g, noise_mw));
      }
      report.worst_sinr(g) = std::min(report.worst_sinr(g), worst);
      const double rate = std::log2(1.0 + worst);
      group_rate_sum(g) += rate;
      slot_min_rate = std::min(slot_min_rate, rate);
    }
    if (any_active) slot_min_sum += slot_min_rate;
  }

  report.group_rate = factor * group_rate_sum;
  report.mmf_rate = factor * slot_min_sum;
  for (int g = 0; g < n_groups; ++g) {
    if (!std::isfinite(report.worst_sinr(g))) report.worst_sinr(g) = 0.0;
  }
  return report;
}

RateReport td_mmf_rate(TdScheme scheme, const ChannelSet& channels,
                       const SlotSchedule& schedule, double p_slot_mw,
                       double noise_mw, const ScaOptions& sca_opts, Rng& rng,
                       RateNormalization norm) {
  const auto decisions = td_beamforming_decisions(
      scheme, channels, schedule, p_slot_mw, noise_mw, sca_opts, rng);
  return td_rates_from_decisions(channels, schedule, decisions, noise_mw, norm);
}

}  // namespace cfmgm
