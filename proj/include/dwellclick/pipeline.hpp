#pragma once

// Glue shared by the CLI and the end-to-end tests: fit every (ad, app)
// group of a click log and turn the fitted models into a threshold report.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dwellclick/click_log.hpp"
#include "dwellclick/mixture.hpp"
#include "dwellclick/threshold.hpp"

namespace dwell {

struct GroupFits {
    ModelMap models;
    std::map<GroupKey, std::string> failures;  // groups where every K failed
    PreprocessStats stats;
    std::array<std::size_t, 4> k_counts{};  // index = selected K

    double k_percent(int k) const;
};

// Groups below ingest.min_clicks_threshold are skipped. Throws
// Error{insufficient_data} when no group meets the floor.
GroupFits fit_groups(const std::vector<ClickRecord>& records, const IngestConfig& ingest, const FitConfig& fit);

enum class ThresholdMode { pivot, per_app };

// Pivot mode: one threshold from the pivot app's ads becomes the default
// for every app. Per-app mode: per-app thresholds, network default for the rest.
ThresholdReport build_threshold_report(const ModelMap& models, const ThresholdPolicy& policy, ThresholdMode mode,
                                       const std::optional<std::string>& pivot_app);

nlohmann::ordered_json to_json(const GroupFits& fits);
ModelMap models_from_json(const nlohmann::json& j);

}  // namespace dwell
