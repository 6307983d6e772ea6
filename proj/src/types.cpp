#include "dwellclick/types.hpp"

namespace dwell {

const char* to_string(Platform p) {
    switch (p) {
        case Platform::android: return "android";
        case Platform::ios: return "ios";
        case Platform::other: return "other";
    }
    return "other";
}

std::optional<Platform> parse_platform(std::string_view text) {
    if (text == "android") return Platform::android;
    if (text == "ios") return Platform::ios;
    if (text == "other") return Platform::other;
    return std::nullopt;
}

const char* to_string(ThresholdScope s) {
    switch (s) {
        case ThresholdScope::per_ad: return "per_ad";
        case ThresholdScope::per_app: return "per_app";
        case ThresholdScope::pivot_global: return "pivot_global";
        case ThresholdScope::default_: return "default";
    }
    return "default";
}

const char* to_string(ThresholdStatistic s) {
    return s == ThresholdStatistic::median ? "median" : "mean";
}

std::optional<ThresholdScope> parse_threshold_scope(std::string_view text) {
    if (text == "per_ad") return ThresholdScope::per_ad;
    if (text == "per_app") return ThresholdScope::per_app;
    if (text == "pivot_global") return ThresholdScope::pivot_global;
    if (text == "default") return ThresholdScope::default_;
    return std::nullopt;
}

std::optional<ThresholdStatistic> parse_threshold_statistic(std::string_view text) {
    if (text == "median") return ThresholdStatistic::median;
    if (text == "mean") return ThresholdStatistic::mean;
    return std::nullopt;
}

const ThresholdEstimate& threshold_for(const std::string& app_id, const ThresholdMap& thresholds,
                                       const ThresholdEstimate& fallback) {
    const auto it = thresholds.find(app_id);
    return it == thresholds.end() ? fallback : it->second;
}

}  // namespace dwell
