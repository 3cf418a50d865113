#pragma once

#include "ctoda/todasolver.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace ctoda {

/// Entry point of the `ctoda` executable; `args` excludes the program name.
/// Exit codes: 0 success, 1 verification failure, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// JSON emitted by `lie info`.
nlohmann::json lie_info_json(const RootSystem& rs);
/// JSON emitted by `lie restrict`.
nlohmann::json lie_restrict_json(const RootSystem& rs);

/// Solver configuration as stored in a run manifest (dx, dy exactly, q as text).
nlohmann::json config_to_json(const SolverConfig& cfg);
/// Inverse of config_to_json. Throws std::invalid_argument on missing or malformed keys.
SolverConfig config_from_json(const nlohmann::json& j);

/// Conventions recorded with every solver output.
nlohmann::json conventions_json();

/// Reads key=value lines (blank lines and '#' comments ignored) into "--key=value" tokens.
/// Throws std::invalid_argument on a malformed line or unreadable file.
std::vector<std::string> read_config_tokens(const std::filesystem::path& path);

/// Field file I/O by extension: ".csv" is CSV, anything else the binary grid format.
void write_field(const std::filesystem::path& path, const HFieldGrid& field);
HFieldGrid read_field(const std::filesystem::path& path, const DomainGrid& grid);

std::filesystem::path manifest_path(const std::filesystem::path& field_path);

}  // namespace ctoda
