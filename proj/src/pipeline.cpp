#include "dwellclick/pipeline.hpp"

#include "dwellclick/error.hpp"

namespace dwell {

double GroupFits::k_percent(int k) const {
    const std::size_t total = k_counts[1] + k_counts[2] + k_counts[3];
    if (total == 0 || k < 1 || k > 3) return 0.0;
    return 100.0 * static_cast<double>(k_counts[static_cast<std::size_t>(k)]) / static_cast<double>(total);
}

GroupFits fit_groups(const std::vector<ClickRecord>& records, const IngestConfig& ingest, const FitConfig& fit) {
    ingest.validate();
    fit.validate();
    auto pre = preprocess(records, ingest, ingest.min_clicks_threshold);
    GroupFits out;
    out.stats = pre.stats;
    for (const auto& [key, sample] : pre.samples) {
        if (sample.low_sample) continue;
        try {
            auto sel = select_model(sample.log_dwell, fit);
            ++out.k_counts[static_cast<std::size_t>(sel.model.k)];
            out.models.emplace(key, std::move(sel.model));
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::fit_failure) throw;
            out.failures.emplace(key, e.what());
        }
    }
    if (out.models.empty() && out.failures.empty()) {
        throw Error(ErrorKind::insufficient_data, "no (ad, app) group has at least " +
                                                      std::to_string(ingest.min_clicks_threshold) + " clicks");
    }
    return out;
}

ThresholdReport build_threshold_report(const ModelMap& models, const ThresholdPolicy& policy, ThresholdMode mode,
                                       const std::optional<std::string>& pivot_app) {
    policy.validate();
    ThresholdReport report;
    report.statistic = policy.per_ad_statistic;
    report.aggregate = policy.aggregate;
    if (mode == ThresholdMode::pivot) {
        if (!pivot_app || pivot_app->empty()) throw Error(ErrorKind::contract, "pivot mode needs a pivot app");
        report.mode = "pivot";
        report.pivot_app = pivot_app;
        report.default_threshold =
            aggregate_threshold(per_ad_thresholds(models, policy, *pivot_app), policy, ThresholdScope::pivot_global);
        return report;
    }
    report.mode = "per-app";
    report.thresholds = per_app_thresholds(models, policy);
    report.default_threshold = network_default_threshold(models, policy);
    return report;
}

nlohmann::ordered_json to_json(const GroupFits& fits) {
    nlohmann::ordered_json j;
    auto groups = nlohmann::ordered_json::array();
    for (const auto& [key, model] : fits.models) {
        groups.push_back({{"ad_id", key.first}, {"app_id", key.second}, {"model", to_json(model)}});
    }
    auto failures = nlohmann::ordered_json::array();
    for (const auto& [key, msg] : fits.failures) {
        failures.push_back({{"ad_id", key.first}, {"app_id", key.second}, {"error", msg}});
    }
    nlohmann::ordered_json summary;
    summary["groups_fitted"] = fits.models.size();
    summary["groups_failed"] = fits.failures.size();
    for (int k = 1; k <= 3; ++k) {
        summary["k" + std::to_string(k)] = {{"ads", fits.k_counts[static_cast<std::size_t>(k)]},
                                            {"percent", fits.k_percent(k)}};
    }
    j["summary"] = std::move(summary);
    j["preprocess"] = {{"total", fits.stats.total},
                       {"outliers_dropped", fits.stats.outliers_dropped},
                       {"nonpositive_dropped", fits.stats.nonpositive_dropped},
                       {"groups", fits.stats.groups},
                       {"low_sample_groups", fits.stats.low_sample_groups}};
    j["groups"] = std::move(groups);
    j["failures"] = std::move(failures);
    return j;
}

ModelMap models_from_json(const nlohmann::json& j) {
    try {
        ModelMap out;
        for (const auto& g : j.at("groups")) {
            out.emplace(GroupKey{g.at("ad_id").get<std::string>(), g.at("app_id").get<std::string>()},
                        mixture_from_json(g.at("model")));
        }
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::schema, std::string("bad models json: ") + e.what());
    }
}

}  // namespace dwell
