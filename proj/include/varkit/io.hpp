#pragma once

#include "varkit/cleaning.hpp"
#include "varkit/core.hpp"
#include "varkit/gaps.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace varkit {

/// Shortest decimal string that parses back to exactly the same double.
/// All numeric output goes through this, making reruns byte-identical.
std::string format_double(double v);

/// Strict double parse of a full token; IoError mentioning `where` on
/// failure or trailing characters.
double parse_double(const std::string& token, const std::string& where);

/// Series CSV: header `date,value`, one row per date, empty value =
/// missing, `#` lines skipped. Parse failures raise IoError with the
/// 1-based line number.
TimeSeries read_series_csv(const std::string& path, const std::string& id = "series");
void write_series_csv(const std::string& path, const TimeSeries& x);

/// Panel CSV: header `date,<id>,...` with instrument ids like OIS:5Y,
/// DEPO:3M, IRS:10Y, CDS:ACME; empty cells = missing; `#` lines skipped.
InstrumentPanel read_panel_csv(const std::string& path);
void write_panel_csv(const std::string& path, const InstrumentPanel& panel);

/// Changelog CSV: header `date,id,action,old_value,new_value`; empty
/// old_value means the cell was previously missing.
ChangeLog read_changelog_csv(const std::string& path);
void write_changelog_csv(const std::string& path, const ChangeLog& log);

void write_detections_csv(const std::string& path, const std::vector<DetectionResult>& dets);

void write_track_csv(const std::string& path, const GapTrack& track,
                     const std::string& value_header);

/// Flat `key = value` config file; `#` comments and blank lines
/// skipped; duplicate keys are an error. Returns pairs in file order so
/// callers can reject unknown keys by name.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// FNV-1a hash of a file's raw bytes, for provenance fields.
std::uint64_t hash_file(const std::string& path);
std::string hex64(std::uint64_t v);

} // namespace varkit
