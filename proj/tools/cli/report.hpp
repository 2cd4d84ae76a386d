#pragma once

#include <ostream>
#include <string_view>

#include <json.hpp>

#include "cli/checks.hpp"

namespace qframe::cli {

inline constexpr std::string_view kToolName = "qframe";
inline constexpr std::string_view kToolVersion = "1.0.0";

// Keys are sorted, so equal reports serialize identically. The timestamp is
// the only field allowed to differ between identical runs.
nlohmann::json report_json(const Report& report, bool with_timestamp = true);

void write_text(std::ostream& os, const Report& report);

}  // namespace qframe::cli
