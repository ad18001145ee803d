#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "otfkm/clifford.hpp"
#include "otfkm/report.hpp"

namespace otfkm {

/// Unset fields fall back to per-check defaults sized for the acceptance
/// suite (1000 samples for verify-cm, 100 for lemma31, ...).
struct CheckOptions {
  std::optional<int> samples;
  std::uint64_t seed = 42;
  std::optional<double> t;      // M_+^t angle; default sweeps several angles
  std::optional<double> beta0;  // flow start angle; default pi/6
  std::optional<double> tol;    // overrides the tolerance of every row
};

/// Names accepted by run_check, in the order `all` runs them.
const std::vector<std::string>& check_names();

/// Runs one named check on one instance. Rows are returned in a fixed order.
/// Throws ErrorCode::domain for unknown names or inadmissible instances.
std::vector<CheckReport> run_check(const std::string& name, const SystemPtr& sys, const CheckOptions& opts);

/// Every check on every instance, followed by one skipped row documenting
/// the global Laplace-spectrum inequalities that are not computed.
std::vector<CheckReport> run_all(const std::vector<std::pair<int, int>>& instances, const CheckOptions& opts);

}  // namespace otfkm
