#include "cfmgm/config.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace cfmgm {

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

int SystemConfig::total_users() const {
  return std::accumulate(users_per_group.begin(), users_per_group.end(), 0);
}

bool SystemConfig::overloaded() const { return total_users() > n_antennas; }

double SystemConfig::tx_power_mw() const { return dbm_to_mw(tx_power_dbm); }

double SystemConfig::noise_mw() const { return dbm_to_mw(noise_dbm); }

double SystemConfig::rician_kappa_linear() const {
  return db_to_linear(std::min(rician_kappa_db, kKappaDbCap));
}

bool SystemConfig::pure_los() const { return rician_kappa_db >= kKappaDbCap; }

void SystemConfig::validate(bool cf_mgm_enabled) const {
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("SystemConfig: " + what);
  };
  if (n_antennas < 1) fail("n_antennas must be >= 1");
  if (n_groups < 1) fail("n_groups must be >= 1");
  if (n_antennas < n_groups) fail("n_antennas must be >= n_groups");
  if (cf_mgm_enabled && n_antennas != n_groups + 2) {
    fail("CSIT-free operation requires n_antennas == n_groups + 2 (got N=" +
         std::to_string(n_antennas) + ", G=" + std::to_string(n_groups) + ")");
  }
  if (static_cast<int>(users_per_group.size()) != n_groups) {
    fail("users_per_group must have one entry per group");
  }
  for (int k : users_per_group) {
    if (k < 1) fail("every group needs at least one user");
  }
  if (!(distance_range.lo > 0.0)) fail("distance_range.lo must be > 0");
  if (!(distance_range.hi >= distance_range.lo)) {
    fail("distance_range must be a nonempty closed interval");
  }
  if (!(aod_range.hi >= aod_range.lo)) {
    fail("aod_range must be a nonempty closed interval");
  }
  if (!std::isfinite(tx_power_dbm)) fail("tx_power_dbm must be finite");
  if (!std::isfinite(noise_dbm)) fail("noise_dbm must be finite");
  if (n_trials < 1) fail("n_trials must be >= 1");
  if (!(csir_error_rel_var >= 0.0)) fail("csir_error_rel_var must be >= 0");
  if (!(element_phase_const > 0.0)) fail("element_phase_const must be > 0");
}

SystemConfig with_users_per_group(SystemConfig cfg, int users) {
  cfg.users_per_group.assign(static_cast<std::size_t>(cfg.n_groups), users);
  return cfg;
}

}  // namespace cfmgm
