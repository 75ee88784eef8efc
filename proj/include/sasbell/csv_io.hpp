#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "sasbell/analyzer.hpp"
#include "sasbell/simulation.hpp"

namespace sasbell {

inline constexpr const char* kCountsHeader =
    "setting_id,hwp_s_deg,qwp_s_deg,hwp_as_deg,qwp_as_deg,n_pp,n_pm,n_mp,n_mm,n_pulses";
inline constexpr const char* kHistogramHeader = "delay_pulses,counts";

/// `# key=value` lines written at the top of every output file.
using Metadata = std::vector<std::pair<std::string, std::string>>;

struct CountsRow {
  MeasurementSetting setting;
  CoincidenceCounts counts;
};

std::string format_metadata(const Metadata& meta);
std::string format_counts_csv(const std::vector<CountsRow>& rows, const Metadata& meta = {});
std::string format_histogram_csv(const DelayHistogram& h, const Metadata& meta = {});

/// Inverse of format_counts_csv. Metadata lines are skipped; any other
/// deviation from the schema throws DataError naming the line.
std::vector<CountsRow> parse_counts_csv(std::string_view text);
DelayHistogram parse_histogram_csv(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);
/// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Fixed-point decimal with `digits` fractional digits; never prints "-0.0".
std::string format_fixed(double value, int digits);

}  // namespace sasbell
