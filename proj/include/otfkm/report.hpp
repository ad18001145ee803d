#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace otfkm {

/// One verified claim on one instance.
struct CheckReport {
  std::string check_name;
  std::string claim;  // short statement of what was verified
  int m = 0;
  int k = 0;
  int l = 0;
  std::string param;  // extra instance parameters, e.g. "t=0.2"
  int samples = 0;
  std::uint64_t seed = 0;
  std::optional<double> max_abs_error;  // empty for skipped rows
  double tolerance = 0.0;
  bool pass = false;
  bool skipped = false;  // documented but not computed; never counts as a failure
  double wall_time_ms = 0.0;
  std::vector<std::pair<std::string, double>> values;  // named by-products (limit, C, T, ...)
};

/// Sets pass = (error <= tolerance) and fills the error.
void settle(CheckReport& report, double max_abs_error);

/// True when every non-skipped row passes.
bool all_pass(const std::vector<CheckReport>& reports);

/// JSON array, one object per report; doubles printed with %.17g.
std::string to_json(const std::vector<CheckReport>& reports);
std::vector<CheckReport> reports_from_json(std::string_view text);

inline constexpr const char* kCsvHeader =
    "check_name,m,k,param,samples,seed,max_abs_error,tolerance,pass,wall_time_ms";
std::string to_csv(const std::vector<CheckReport>& reports);

/// %.17g; "null" is never produced here.
std::string format_double(double v);

}  // namespace otfkm
