#pragma once

#include "exo/simulation.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace exo {

/// Header of the per-tick CSV, one name per column.
std::vector<std::string> log_columns();

void write_log_csv(std::ostream& out, const std::vector<TickRecord>& ticks);

/// Which groups of derived columns were absent from a CSV that was read.
struct MissingColumns {
  bool joint_errors = false;  ///< xi, eta, V
  bool sync_errors = false;   ///< e, r, V_sync
  bool chi = false;           ///< chi, rho
  bool chi_sync = false;
  bool inputs = false;        ///< u_joint, u_sat, u_n, sigma

  bool any() const { return joint_errors || sync_errors || chi || chi_sync || inputs; }
};

struct LoadedLog {
  std::vector<TickRecord> ticks;
  MissingColumns missing;
};

/**
 * Reads a per-tick CSV. The state columns (t, q, qdot, q_d, qdot_d, theta,
 * thetadot, lead) are required; derived columns may be omitted and are then
 * flagged in LoadedLog::missing. Throws ConfigError on malformed input.
 */
LoadedLog read_log_csv(std::istream& in);

/**
 * Fills the derived columns flagged as missing from the state columns. The
 * lead acceleration needed for chi_sync is taken from a central difference of
 * the logged lead velocity.
 */
void recompute_missing(LoadedLog& log, const Scenario& sc, const DerivedConstants& c);

void write_switches_csv(std::ostream& out, const SwitchLog& switches);

/// Summary in `key: value` lines.
void write_report(std::ostream& out, const Scenario& sc, const DerivedConstants& c,
                  const CertificateReport& r, std::size_t ticks, const std::string& status);

}  // namespace exo
