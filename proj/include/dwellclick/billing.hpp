#pragma once

// Non-accidental click rates, pivot-relative discount factors and the
// revenue comparison between charge-all, discard and smooth-discount billing.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dwellclick/types.hpp"

namespace dwell {

inline constexpr double kDefaultZ = 1.959964;

struct ClickCounts {
    std::string app_id;
    std::size_t total_clicks = 0;
    std::size_t non_accidental_clicks = 0;
    bool insufficient = false;  // total below the caller's floor
};

struct CountResult {
    std::map<std::string, ClickCounts> apps;
    // (ad, app) pairs with fewer clicks than the floor, per app.
    std::map<std::string, std::size_t> ad_pairs_below_floor;
    std::map<std::string, std::size_t> ad_pairs;
};

CountResult count_clicks(const std::vector<ClickRecord>& records, const ThresholdMap& thresholds,
                         const ThresholdEstimate& fallback, std::size_t min_clicks);

enum class IntervalMethod { mle, normal_approx, agresti_coull };

const char* to_string(IntervalMethod m);
std::optional<IntervalMethod> parse_interval_method(std::string_view text);

struct NacrEstimate {
    std::string app_id;
    double point = 0.0;
    double lcb = 0.0;
    double ucb = 0.0;
    IntervalMethod method = IntervalMethod::mle;
    std::size_t n = 0;
    double z = kDefaultZ;
};

NacrEstimate nacr_mle(const ClickCounts& c);
NacrEstimate nacr_normal_interval(const ClickCounts& c, double z);
// point carries the Agresti-Coull centre (X + z^2/2) / (n + z^2).
NacrEstimate nacr_agresti_coull(const ClickCounts& c, double z);
NacrEstimate estimate_nacr(const ClickCounts& c, IntervalMethod method, double z);

// Highest point estimate; ties go to larger n, then the smaller app id.
std::string select_pivot(const std::vector<NacrEstimate>& estimates);

// Unguarded: ucb(app)/ucb(pivot). Guarded:
// max(lcb(app)/ucb(pivot), min(ucb(app)/ucb(pivot), 1)).
double discount_factor(const NacrEstimate& app, const NacrEstimate& pivot, bool guarded);

inline double adjusted_cpc(double cpc, double factor) { return cpc * factor; }

struct DiscountEntry {
    std::string app_id;
    NacrEstimate nacr;
    std::optional<double> discount_factor;  // absent when the app lacks data
    std::vector<std::string> flags;
};

struct DiscountOptions {
    IntervalMethod method = IntervalMethod::agresti_coull;
    double z = kDefaultZ;
    bool guarded = true;
    // Pivot self-discount: when enabled and the pivot's accidental clicks
    // exceed the alert count, the pivot gets the largest other-app factor.
    bool pivot_self_discount = false;
    std::size_t pivot_alert_clicks = 0;
};

struct DiscountReport {
    std::string pivot_app;
    IntervalMethod method = IntervalMethod::agresti_coull;
    double z = kDefaultZ;
    NacrEstimate pivot_nacr;
    std::vector<DiscountEntry> entries;
    ThresholdEstimate threshold_used;
    bool pivot_update_recommended = false;

    // Factor applied to accidental clicks of an app; 1 when it has none.
    double factor_for(const std::string& app_id) const;
};

// Throws Error{insufficient_data} when no app meets the click floor.
DiscountReport build_discount_report(const CountResult& counts, const DiscountOptions& options,
                                     const ThresholdEstimate& threshold_used);

struct RevenueImpact {
    double chargeall = 0.0;
    double discard = 0.0;
    double smooth = 0.0;
    std::optional<double> mitigation_ratio;  // absent when there is nothing to discount
    std::size_t billed_clicks = 0;
    std::size_t accidental_clicks = 0;
    std::size_t skipped_missing_cpc = 0;
};

RevenueImpact revenue_impact(const std::vector<ClickRecord>& records, const DiscountReport& report,
                             const ThresholdMap& thresholds, const ThresholdEstimate& fallback);

nlohmann::ordered_json to_json(const NacrEstimate& e);
nlohmann::ordered_json to_json(const DiscountReport& report, const std::optional<RevenueImpact>& impact);

}  // namespace dwell
