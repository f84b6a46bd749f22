#pragma once

#include <map>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

namespace congru::cli {

enum ExitCode { kComputed = 0, kVerdictFails = 1, kInputError = 2, kBoundExceeded = 3 };

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Leaf paths of a record, e.g. "result.modules[0].eta" -> "(pi^2)".
std::map<std::string, std::string> flatten(const nlohmann::json& record);

/// The text rendering: one `path = value` line per leaf, in path order.
std::string render_text(const nlohmann::json& record);

/// Inverse of render_text.
std::map<std::string, std::string> parse_text(const std::string& text);

}  // namespace congru::cli
