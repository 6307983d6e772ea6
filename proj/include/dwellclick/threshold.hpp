#pragma once

// Accidental-click dwell thresholds derived from the first (lowest-mean)
// mixture component of each three-component ad.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dwellclick/click_log.hpp"
#include "dwellclick/mixture.hpp"
#include "dwellclick/types.hpp"

namespace dwell {

enum class Aggregate { median_of_medians, mean_of_medians };

const char* to_string(Aggregate a);
std::optional<Aggregate> parse_aggregate(std::string_view text);

// Fallback cutoff used when no app has enough three-component ads.
inline constexpr double kFallbackThresholdSeconds = 2.1;

struct ThresholdPolicy {
    Aggregate aggregate = Aggregate::median_of_medians;
    ThresholdStatistic per_ad_statistic = ThresholdStatistic::median;
    std::size_t min_ads = 1;
    double default_threshold_seconds = kFallbackThresholdSeconds;

    void validate() const;
};

// Log-Normal median e^mu, in seconds.
double component_median(const MixtureComponent& c);
// Log-Normal mean e^(mu + sigma2/2), in seconds.
double component_mean(const MixtureComponent& c);

// Only ads whose selected model has exactly three components yield a threshold.
std::optional<ThresholdEstimate> per_ad_threshold(const MixtureModel& model, const ThresholdPolicy& policy);

// Lower median for even counts. Throws Error{insufficient_data} when fewer
// than policy.min_ads estimates are supplied.
ThresholdEstimate aggregate_threshold(const std::vector<ThresholdEstimate>& per_ad, const ThresholdPolicy& policy,
                                      ThresholdScope scope);

using ModelMap = std::map<GroupKey, MixtureModel>;

ThresholdMap per_app_thresholds(const ModelMap& models, const ThresholdPolicy& policy);

// Median-of-medians over every app that meets min_ads, or the 2.1 s
// fallback when none does.
ThresholdEstimate network_default_threshold(const ModelMap& models, const ThresholdPolicy& policy);

// Per-ad thresholds of the ads shown on one app (all apps when app_id is empty).
std::vector<ThresholdEstimate> per_ad_thresholds(const ModelMap& models, const ThresholdPolicy& policy,
                                                 const std::string& app_id = {});

struct EcdfPoint {
    double seconds;
    double cumulative_fraction;
};

std::vector<EcdfPoint> ecdf(std::vector<double> values);

// Threshold report as consumed by the discount and filter commands.
struct ThresholdReport {
    std::string mode;  // "pivot" or "per-app"
    ThresholdStatistic statistic = ThresholdStatistic::median;
    Aggregate aggregate = Aggregate::median_of_medians;
    std::optional<std::string> pivot_app;
    ThresholdMap thresholds;
    ThresholdEstimate default_threshold;
};

nlohmann::ordered_json to_json(const ThresholdEstimate& t);
ThresholdEstimate threshold_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const ThresholdReport& report);
ThresholdReport threshold_report_from_json(const nlohmann::json& j);

}  // namespace dwell
