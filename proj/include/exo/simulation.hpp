#pragma once

#include "exo/monitors.hpp"
#include "exo/records.hpp"

#include <memory>
#include <string>
#include <vector>

namespace exo {

struct SimulationResult {
  Scenario scenario;
  DerivedConstants constants;
  SimulationLog log;
  CertificateReport report;
};

/// Thrown when the state becomes non-finite; carries everything logged so far.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::shared_ptr<SimulationResult> partial)
      : Error(what), partial_(std::move(partial)) {}
  const SimulationResult& partial() const { return *partial_; }

 private:
  std::shared_ptr<SimulationResult> partial_;
};

/**
 * Fixed-step closed-loop run. Per tick: joint errors → joint control (held
 * over the step) → allocation → lead torque B_σu → follower sync inputs →
 * RK4 over the stacked plant + motor state → record. Follower sync inputs are
 * re-evaluated inside every RK4 stage. Monitors run on the finished log.
 */
SimulationResult run(const Scenario& sc);

/// Same as run() but with monitors evaluated from the given constants.
CertificateReport certify(const SimulationLog& log, const Scenario& sc,
                          const DerivedConstants& constants);

/// Rebuild the switch log from the per-tick lead columns.
SwitchLog switches_from_ticks(const std::vector<TickRecord>& ticks);

}  // namespace exo
