#include "otfkm/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "otfkm/error.hpp"

namespace otfkm {

void settle(CheckReport& report, double max_abs_error) {
  report.max_abs_error = max_abs_error;
  report.pass = max_abs_error <= report.tolerance;
}

bool all_pass(const std::vector<CheckReport>& reports) {
  for (const auto& r : reports)
    if (!r.skipped && !r.pass) return false;
  return true;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "NaN";
  if (std::isinf(v)) return v > 0 ? "Infinity" : "-Infinity";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string json_string(std::string_view s) {
  return nlohmann::json(std::string(s)).dump();
}

std::string json_number(double v) {
  // JSON has no NaN or infinities; keep them as strings so parsing round-trips.
  return std::isfinite(v) ? format_double(v) : json_string(format_double(v));
}

double read_number(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "NaN") return NAN;
    if (s == "Infinity") return INFINITY;
    if (s == "-Infinity") return -INFINITY;
    fail(ErrorCode::io, "unexpected string in numeric field: " + s);
  }
  return j.get<double>();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string to_json(const std::vector<CheckReport>& reports) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    os << (i ? ",\n " : "\n ") << "{\"check_name\": " << json_string(r.check_name)
       << ", \"claim\": " << json_string(r.claim) << ", \"m\": " << r.m << ", \"k\": " << r.k
       << ", \"l\": " << r.l << ", \"param\": " << json_string(r.param) << ", \"samples\": " << r.samples
       << ", \"seed\": " << r.seed << ", \"max_abs_error\": "
       << (r.max_abs_error ? json_number(*r.max_abs_error) : "null")
       << ", \"tolerance\": " << json_number(r.tolerance) << ", \"pass\": " << (r.pass ? "true" : "false")
       << ", \"skipped\": " << (r.skipped ? "true" : "false") << ", \"values\": {";
    for (std::size_t v = 0; v < r.values.size(); ++v)
      os << (v ? ", " : "") << json_string(r.values[v].first) << ": " << json_number(r.values[v].second);
    os << "}, \"wall_time_ms\": " << json_number(r.wall_time_ms) << "}";
  }
  os << (reports.empty() ? "]\n" : "\n]\n");
  return os.str();
}

std::vector<CheckReport> reports_from_json(std::string_view text) {
  std::vector<CheckReport> out;
  try {
    const auto doc = nlohmann::json::parse(text);
    if (!doc.is_array()) fail(ErrorCode::io, "report JSON must be an array");
    for (const auto& j : doc) {
      CheckReport r;
      r.check_name = j.at("check_name").get<std::string>();
      r.claim = j.at("claim").get<std::string>();
      r.m = j.at("m").get<int>();
      r.k = j.at("k").get<int>();
      r.l = j.at("l").get<int>();
      r.param = j.at("param").get<std::string>();
      r.samples = j.at("samples").get<int>();
      r.seed = j.at("seed").get<std::uint64_t>();
      if (!j.at("max_abs_error").is_null()) r.max_abs_error = read_number(j.at("max_abs_error"));
      r.tolerance = read_number(j.at("tolerance"));
      r.pass = j.at("pass").get<bool>();
      r.skipped = j.value("skipped", false);
      if (j.contains("values"))
        for (const auto& [key, val] : j.at("values").items()) r.values.emplace_back(key, read_number(val));
      r.wall_time_ms = read_number(j.at("wall_time_ms"));
      out.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::io, std::string("malformed report JSON: ") + e.what());
  }
  return out;
}

std::string to_csv(const std::vector<CheckReport>& reports) {
  std::ostringstream os;
  os << kCsvHeader << "\n";
  for (const auto& r : reports) {
    os << csv_field(r.check_name) << "," << r.m << "," << r.k << "," << csv_field(r.param) << ","
       << r.samples << "," << r.seed << "," << (r.max_abs_error ? format_double(*r.max_abs_error) : "")
       << "," << format_double(r.tolerance) << "," << (r.pass ? "true" : "false") << ","
       << format_double(r.wall_time_ms) << "\n";
  }
  return os.str();
}

}  // namespace otfkm
