#include "cli/report.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <iomanip>
#include <string>

namespace qframe::cli {
namespace {

std::string sci(double v, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*e", digits, v);
  return buf;
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

nlohmann::json report_json(const Report& report, bool with_timestamp) {
  using nlohmann::json;
  json results = json::array();
  for (const auto& r : report.records) {
    json row{{"check", r.check},
             {"point_index", r.point_index},
             {"point", r.point},
             {"tolerance", r.tolerance},
             {"bound", r.bound == Bound::kAtMost ? "at_most" : "at_least"},
             {"pass", r.pass}};
    // NaN and inf have no JSON form; they are reported as null.
    row["residual"] = r.residual && std::isfinite(*r.residual) ? json(*r.residual) : json(nullptr);
    if (!r.diagnostic.empty()) row["diagnostic"] = r.diagnostic;
    results.push_back(std::move(row));
  }
  json out{{"tool", {{"name", kToolName}, {"version", kToolVersion}}},
           {"scenario", report.scenario},
           {"checks", report.checks},
           {"results", std::move(results)},
           {"summary",
            {{"total", report.total()},
             {"passed", report.passed},
             {"failed", report.failed}}}};
  if (with_timestamp) {
    out["timestamp"] = utc_now();
  }
  return out;
}

void write_text(std::ostream& os, const Report& report) {
  const auto name = report.scenario.value("name", std::string{});
  os << "scenario " << name << ": " << report.checks.size() << " checks x "
     << (report.checks.empty() ? 0 : report.total() / report.checks.size())
     << " points\n\n";
  os << std::left << std::setw(24) << "check" << std::setw(7) << "point"
     << std::setw(14) << "residual" << std::setw(14) << "tolerance" << "status\n";
  for (const auto& r : report.records) {
    os << std::left << std::setw(24) << r.check << std::setw(7) << r.point_index;
    if (r.residual) {
      os << std::setw(14) << sci(*r.residual, 3);
    } else {
      os << std::setw(14) << "-";
    }
    os << std::setw(14)
       << (r.bound == Bound::kAtMost ? "<=" : ">=") + sci(r.tolerance, 1)
       << (r.pass ? "ok" : "FAIL");
    if (!r.diagnostic.empty()) os << "  " << r.diagnostic;
    os << '\n';
  }
  os << "\n" << report.passed << "/" << report.total() << " passed, "
     << report.failed << " failed\n";
}

}  // namespace qframe::cli
