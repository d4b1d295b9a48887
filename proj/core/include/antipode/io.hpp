#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "antipode/certify.hpp"
#include "antipode/constructions.hpp"
#include "antipode/search.hpp"

namespace antipode {

/// Provenance block embedded in every output file. Everything except
/// `timestamp` is a deterministic function of the run.
struct RunManifest {
  std::string command_line;
  std::vector<std::pair<std::string, std::string>> config;
  std::optional<std::uint64_t> seed;
  std::string tool_version;
  std::string numeric_mode;
  std::string timestamp;
};

std::string tool_version();
/// ISO 8601 UTC, second resolution.
std::string utc_timestamp();

/// Space descriptor, e.g. {"kind":"lp","n":3,"p":"inf"}.
std::string space_to_json(const NormSpace& space);
/// Accepts kinds lp, polytope_v, polytope_f and cylinder. Numeric entries
/// may be JSON numbers or strings ("5/9", "-0.25", "inf" for p).
NormSpace space_from_json(std::string_view text);

/// {"space": ..., "points": [[...], ...], "manifest": ...}. A coordinate is
/// written as a number when the double is exact, else as "p/q".
std::string points_to_json(const PointSet& set, const RunManifest* manifest = nullptr);
/// Reads the "points" array (or a bare array). `space` overrides a space
/// embedded in the file; one of the two must be present.
PointSet points_from_json(std::string_view text, const std::optional<NormSpace>& space = std::nullopt,
                          double sphere_tol = 1e-9, bool project = false);
/// The "space" member of a points or certificate file, if any.
std::optional<NormSpace> embedded_space(std::string_view text);

std::string certificate_to_json(const Certificate& cert, const RunManifest* manifest = nullptr);
/// Rebuilds the point set (validated at the recorded sphere tolerance) and
/// every pair record. Throws Error(Parse) on malformed input.
Certificate certificate_from_json(std::string_view text);

std::string construction_to_json(const Construction& c, const RunManifest* manifest = nullptr);
/// Distinct functionals of the "suggested_witnesses" array of a
/// construction file, in file order; empty when absent.
std::vector<RationalVec> suggested_from_json(std::string_view text);

/// One line, no trailing newline.
std::string search_result_to_jsonl(const SearchResult& r, const RunManifest* manifest = nullptr);

std::string manifest_to_json(const RunManifest& manifest);

/// Whole file; Error(Parse) when it cannot be read.
std::string read_text_file(const std::string& path);
/// Writes to a sibling temporary file, then renames over `path`.
void write_text_file_atomic(const std::string& path, const std::string& content);
/// Appends one line (a newline is added).
void append_line(const std::string& path, const std::string& line);

}  // namespace antipode
