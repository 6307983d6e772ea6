#pragma once

// Domain records shared across the pipeline stages.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dwell {

enum class Platform { android, ios, other };

const char* to_string(Platform p);
std::optional<Platform> parse_platform(std::string_view text);

struct ClickRecord {
    std::string ad_id;
    std::string app_id;
    Platform platform = Platform::other;
    std::int64_t timestamp = 0;  // UTC epoch seconds
    double dwell_seconds = 0.0;
    std::optional<double> cpc;
    std::optional<bool> converted;

    friend bool operator==(const ClickRecord&, const ClickRecord&) = default;
};

// Log-dwell observations of one (ad, app) pair.
struct AdSample {
    std::string ad_id;
    std::string app_id;
    std::vector<double> log_dwell;
    bool low_sample = false;

    std::size_t n() const { return log_dwell.size(); }
};

enum class ThresholdScope { per_ad, per_app, pivot_global, default_ };
enum class ThresholdStatistic { median, mean };

const char* to_string(ThresholdScope s);
const char* to_string(ThresholdStatistic s);
std::optional<ThresholdScope> parse_threshold_scope(std::string_view text);
std::optional<ThresholdStatistic> parse_threshold_statistic(std::string_view text);

// A dwell-time cutoff in seconds. Clicks at or below it are accidental.
struct ThresholdEstimate {
    double seconds = 0.0;
    ThresholdScope scope = ThresholdScope::default_;
    std::size_t source_ads = 0;
    ThresholdStatistic statistic = ThresholdStatistic::median;
};

using ThresholdMap = std::map<std::string, ThresholdEstimate>;

// Threshold for an app, falling back to the default when the app is absent.
const ThresholdEstimate& threshold_for(const std::string& app_id, const ThresholdMap& thresholds,
                                       const ThresholdEstimate& fallback);

inline bool is_accidental(double dwell_seconds, const ThresholdEstimate& t) {
    return dwell_seconds <= t.seconds;
}

}  // namespace dwell
