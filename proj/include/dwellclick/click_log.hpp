#pragma once

// Click-log ingestion: CSV/JSONL parsing, outlier removal and log transform,
// and removal of accidental clicks for training-data export.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dwellclick/types.hpp"

namespace dwell {

enum class LogFormat { csv, jsonl };

std::optional<LogFormat> parse_log_format(std::string_view text);
const char* to_string(LogFormat f);

inline constexpr const char* kCsvHeader = "ad_id,app_id,platform,timestamp,dwell_seconds,cpc,converted";

struct Rejection {
    std::size_t line = 0;  // 1-based, counting the CSV header
    std::string reason;
};

struct ParsedLog {
    std::vector<ClickRecord> records;
    std::vector<Rejection> rejections;
};

// Throws Error{schema} when the CSV header does not match, naming the
// missing columns. Malformed rows are skipped and reported.
ParsedLog parse_click_log(std::istream& in, LogFormat format);
ParsedLog read_click_log(const std::string& path, LogFormat format);

void write_click_log(std::ostream& out, const std::vector<ClickRecord>& records, LogFormat format);
void write_click_log(const std::string& path, const std::vector<ClickRecord>& records, LogFormat format);

struct IngestConfig {
    double outlier_cap_seconds = 600.0;
    std::size_t min_clicks_threshold = 100;
    std::size_t min_clicks_discount = 40;

    void validate() const;
};

struct PreprocessStats {
    std::size_t total = 0;
    std::size_t outliers_dropped = 0;
    std::size_t nonpositive_dropped = 0;
    std::size_t groups = 0;
    std::size_t low_sample_groups = 0;
};

using GroupKey = std::pair<std::string, std::string>;  // (ad_id, app_id)

struct PreprocessResult {
    std::map<GroupKey, AdSample> samples;
    PreprocessStats stats;
};

// Drops dwell <= 0 and dwell > cap, takes natural logs and groups by
// (ad, app). Groups smaller than min_clicks are kept but flagged.
PreprocessResult preprocess(const std::vector<ClickRecord>& records, const IngestConfig& cfg,
                            std::size_t min_clicks);

struct FilterResult {
    std::vector<ClickRecord> kept;
    std::vector<ClickRecord> removed;
};

FilterResult filter_accidental(const std::vector<ClickRecord>& records, const ThresholdMap& thresholds,
                               const ThresholdEstimate& default_threshold);

}  // namespace dwell
