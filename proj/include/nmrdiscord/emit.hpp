#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "nmrdiscord/experiment.hpp"

namespace nmrd {

inline constexpr const char* kCsvHeader =
    "omega,t,pseudo_concurrence,concurrence,geometric_discord,entropic_discord,min_eigenvalue";

enum class Measure { pseudo_concurrence, concurrence, geometric_discord, entropic_discord };

std::string to_string(Measure m);

// Shortest decimal form that parses back to the same double.
std::string format_number(double x);

void write_csv(const ResultTable& table, std::ostream& out);
std::string to_csv(const ResultTable& table);

// { "command": ..., "config": {...}, "rows": [{...}, ...] }
nlohmann::json to_json(const ResultTable& table);

// Line chart of one measure: x is omega for sweeps (one line per sample
// time) and t otherwise.
std::string to_svg(const ResultTable& table, Measure measure);

// Writes <command>.csv, <command>.json and <command>_<measure>.svg under
// out_dir. Returns the written paths; throws IoError naming the failing path.
std::vector<std::filesystem::path> emit(const ResultTable& table, std::span<const OutputFormat> formats,
                                        const std::filesystem::path& out_dir);

}  // namespace nmrd
