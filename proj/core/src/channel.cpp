#include "cfmgm/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cfmgm {

std::vector<GroupGeometry> sample_geometry(const SystemConfig& cfg,
                                           std::uint64_t trial_seed) {
  Rng rng(trial_seed);
  std::vector<GroupGeometry> out(static_cast<std::size_t>(cfg.n_groups));
  for (int g = 0; g < cfg.n_groups; ++g) {
    auto& group = out[static_cast<std::size_t>(g)];
    group.reserve(static_cast<std::size_t>(cfg.users_per_group[g]));
    for (int k = 0; k < cfg.users_per_group[g]; ++k) {
      UserGeometry u;
      u.aod = rng.uniform(cfg.aod_range.lo, cfg.aod_range.hi);
      u.distance = rng.uniform(cfg.distance_range.lo, cfg.distance_range.hi);
      u.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
      group.push_back(u);
    }
  }
  return out;
}

Eigen::VectorXcd array_response(double aod, int n_antennas,
                                double phase_const) {
  if (n_antennas < 1) {
    throw std::invalid_argument("array_response: n_antennas must be >= 1");
  }
  Eigen::VectorXcd a(n_antennas);
  const double step = phase_const * std::sin(aod);
  for (int i = 0; i < n_antennas; ++i) {
    a(i) = std::polar(1.0, -step * i);
  }
  return a;
}

Eigen::VectorXcd los_channel(const UserGeometry& geom, int n_antennas,
                             double phase_const) {
  if (!(geom.distance > 0.0)) {
    throw std::invalid_argument("los_channel: distance must be > 0");
  }
  const std::complex<double> alpha =
      std::polar(1.0 / geom.distance, geom.phase);
  return alpha * array_response(geom.aod, n_antennas, phase_const);
}

RicianParts rician_components(const UserGeometry& geom,
                              const SystemConfig& cfg, Rng& rng) {
  RicianParts parts;
  parts.h_los = los_channel(geom, cfg.n_antennas, cfg.element_phase_const);
  if (cfg.pure_los()) {
    parts.h_nlos = Eigen::VectorXcd::Zero(cfg.n_antennas);
    parts.h = parts.h_los;
    return parts;
  }
  const double nlos_var =
      cfg.nlos_variance_convention == NlosVarianceConvention::kInverseSquareDistance
          ? 1.0 / (geom.distance * geom.distance)
          : 1.0 / geom.distance;
  parts.h_nlos = Eigen::VectorXcd(cfg.n_antennas);
  for (int i = 0; i < cfg.n_antennas; ++i) {
    parts.h_nlos(i) = rng.complex_gaussian(nlos_var);
  }
  const double kappa = cfg.rician_kappa_linear();
  const double w_los = std::sqrt(kappa / (kappa + 1.0));
  const double w_nlos = std::sqrt(1.0 / (kappa + 1.0));
  parts.h = w_los * parts.h_los + w_nlos * parts.h_nlos;
  return parts;
}

Eigen::VectorXcd rician_channel(const UserGeometry& geom,
                                const SystemConfig& cfg, Rng& rng) {
  return rician_components(geom, cfg, rng).h;
}

ChannelSet make_channel_set(const SystemConfig& cfg,
                            std::uint64_t trial_index) {
  ChannelSet set;
  set.n_antennas = cfg.n_antennas;
  set.kappa_db = cfg.rician_kappa_db;
  set.master_seed = cfg.master_seed;
  set.trial_index = trial_index;

  const auto geometry = sample_geometry(
      cfg, derive_seed(cfg.master_seed, trial_index, StreamTag::kGeometry));
  Rng nlos_rng(derive_seed(cfg.master_seed, trial_index, StreamTag::kNlos));

  set.groups.resize(geometry.size());
  for (std::size_t g = 0; g < geometry.size(); ++g) {
    set.groups[g].reserve(geometry[g].size());
    for (const UserGeometry& geom : geometry[g]) {
      auto parts = rician_components(geom, cfg, nlos_rng);
      set.groups[g].push_back(UserChannel{std::move(parts.h),
                                          std::move(parts.h_los),
                                          std::move(parts.h_nlos), geom});
    }
  }
  return set;
}

std::vector<GroupGeometry> geometries_of(const ChannelSet& channels) {
  std::vector<GroupGeometry> out(channels.groups.size());
  for (std::size_t g = 0; g < channels.groups.size(); ++g) {
    out[g].reserve(channels.groups[g].size());
    for (const UserChannel& user : channels.groups[g]) {
      out[g].push_back(user.geometry);
    }
  }
  return out;
}

}  // namespace cfmgm
