#pragma once
/**
 * @file channel.hpp
 * @brief User geometry and Rician mmWave channel generation.
 */

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "cfmgm/config.hpp"
#include "cfmgm/rng.hpp"

namespace cfmgm {

/// One user's placement. The large-scale gain is alpha = e^{j phase} / r.
struct UserGeometry {
  double aod = 0.0;       // radians
  double distance = 0.0;  // meters, > 0
  double phase = 0.0;     // radians, in [0, 2pi)
};

using GroupGeometry = std::vector<UserGeometry>;

struct UserChannel {
  Eigen::VectorXcd h;       // sqrt(k/(k+1)) h_los + sqrt(1/(k+1)) h_nlos
  Eigen::VectorXcd h_los;   // alpha * a(theta); every entry has modulus 1/r
  Eigen::VectorXcd h_nlos;  // i.i.d. CN(0, var) per the configured convention
  UserGeometry geometry;
};

/// All channels of one realization, plus the seeds that produced it so
/// downstream consumers can derive further deterministic substreams.
struct ChannelSet {
  std::vector<std::vector<UserChannel>> groups;
  int n_antennas = 0;
  double kappa_db = 0.0;
  std::uint64_t master_seed = 0;
  std::uint64_t trial_index = 0;
};

/// Draws aod ~ U(aod_range), r ~ U(distance_range), phase ~ U[0, 2pi) for
/// every user, independently. Identical seed gives identical output.
std::vector<GroupGeometry> sample_geometry(const SystemConfig& cfg,
                                           std::uint64_t trial_seed);

/// Uniform linear array response; entry i = exp(-j * phase_const * i * sin(aod)).
Eigen::VectorXcd array_response(double aod, int n_antennas, double phase_const);

/// alpha * a(aod) with alpha = e^{j phase} / r.
Eigen::VectorXcd los_channel(const UserGeometry& geom, int n_antennas,
                             double phase_const);

struct RicianParts {
  Eigen::VectorXcd h;
  Eigen::VectorXcd h_los;
  Eigen::VectorXcd h_nlos;
};

/// LoS/NLoS decomposition; at or above the kappa cap the NLoS part is zero
/// and h equals the LoS channel exactly.
RicianParts rician_components(const UserGeometry& geom, const SystemConfig& cfg,
                              Rng& rng);

Eigen::VectorXcd rician_channel(const UserGeometry& geom,
                                const SystemConfig& cfg, Rng& rng);

/// One full realization, deterministic given (cfg.master_seed, trial_index).
ChannelSet make_channel_set(const SystemConfig& cfg, std::uint64_t trial_index);

std::vector<GroupGeometry> geometries_of(const ChannelSet& channels);

}  // namespace cfmgm
