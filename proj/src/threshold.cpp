#include "dwellclick/threshold.hpp"

#include <algorithm>
#include <cmath>

#include "dwellclick/error.hpp"

namespace dwell {

const char* to_string(Aggregate a) { return a == Aggregate::median_of_medians ? "median" : "mean"; }

std::optional<Aggregate> parse_aggregate(std::string_view text) {
    if (text == "median" || text == "median_of_medians") return Aggregate::median_of_medians;
    if (text == "mean" || text == "mean_of_medians") return Aggregate::mean_of_medians;
    return std::nullopt;
}

void ThresholdPolicy::validate() const {
    if (!(default_threshold_seconds > 0.0) || !std::isfinite(default_threshold_seconds)) {
        throw Error(ErrorKind::contract, "default threshold must be positive and finite");
    }
    if (min_ads == 0) throw Error(ErrorKind::contract, "min_ads must be positive");
}

double component_median(const MixtureComponent& c) { return std::exp(c.mu); }

double component_mean(const MixtureComponent& c) { return std::exp(c.mu + c.sigma2 / 2.0); }

std::optional<ThresholdEstimate> per_ad_threshold(const MixtureModel& model, const ThresholdPolicy& policy) {
    if (model.k != 3 || model.components.size() != 3) return std::nullopt;
    const auto& first = model.components.front();
    const double seconds = policy.per_ad_statistic == ThresholdStatistic::median ? component_median(first)
                                                                                 : component_mean(first);
    return ThresholdEstimate{seconds, ThresholdScope::per_ad, 1, policy.per_ad_statistic};
}

ThresholdEstimate aggregate_threshold(const std::vector<ThresholdEstimate>& per_ad, const ThresholdPolicy& policy,
                                      ThresholdScope scope) {
    if (per_ad.empty() || per_ad.size() < policy.min_ads) {
        throw Error(ErrorKind::insufficient_data, "need at least " + std::to_string(std::max<std::size_t>(policy.min_ads, 1)) +
                                                      " per-ad thresholds, got " + std::to_string(per_ad.size()));
    }
    std::vector<double> v;
    v.reserve(per_ad.size());
    for (const auto& t : per_ad) v.push_back(t.seconds);

    double seconds = 0.0;
    if (policy.aggregate == Aggregate::median_of_medians) {
        const auto mid = v.begin() + static_cast<std::ptrdiff_t>((v.size() - 1) / 2);
        std::nth_element(v.begin(), mid, v.end());
        seconds = *mid;
    } else {
        double sum = 0.0;
        for (double x : v) sum += x;
        seconds = sum / static_cast<double>(v.size());
        // keep the mean inside [min, max] despite rounding
        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        seconds = std::clamp(seconds, *lo, *hi);
    }
    return ThresholdEstimate{seconds, scope, per_ad.size(), policy.per_ad_statistic};
}

std::vector<ThresholdEstimate> per_ad_thresholds(const ModelMap& models, const ThresholdPolicy& policy,
                                                 const std::string& app_id) {
    std::vector<ThresholdEstimate> out;
    for (const auto& [key, model] : models) {
        if (!app_id.empty() && key.second != app_id) continue;
        if (auto t = per_ad_threshold(model, policy)) out.push_back(*t);
    }
    return out;
}

ThresholdMap per_app_thresholds(const ModelMap& models, const ThresholdPolicy& policy) {
    policy.validate();
    std::map<std::string, std::vector<ThresholdEstimate>> by_app;
    for (const auto& [key, model] : models) {
        auto& group = by_app[key.second];
        if (auto t = per_ad_threshold(model, policy)) group.push_back(*t);
    }
    ThresholdMap out;
    for (const auto& [app, estimates] : by_app) {
        if (!estimates.empty() && estimates.size() >= policy.min_ads) {
            out[app] = aggregate_threshold(estimates, policy, ThresholdScope::per_app);
        } else {
            out[app] = ThresholdEstimate{policy.default_threshold_seconds, ThresholdScope::default_, 0,
                                         policy.per_ad_statistic};
        }
    }
    return out;
}

ThresholdEstimate network_default_threshold(const ModelMap& models, const ThresholdPolicy& policy) {
    std::map<std::string, std::vector<ThresholdEstimate>> by_app;
    for (const auto& [key, model] : models) {
        if (auto t = per_ad_threshold(model, policy)) by_app[key.second].push_back(*t);
    }
    std::vector<ThresholdEstimate> pooled;
    for (const auto& [app, estimates] : by_app) {
        if (estimates.size() >= policy.min_ads) pooled.insert(pooled.end(), estimates.begin(), estimates.end());
    }
    if (pooled.empty()) {
        return ThresholdEstimate{kFallbackThresholdSeconds, ThresholdScope::default_, 0, policy.per_ad_statistic};
    }
    ThresholdPolicy median_policy = policy;
    median_policy.aggregate = Aggregate::median_of_medians;
    median_policy.min_ads = 1;
    auto t = aggregate_threshold(pooled, median_policy, ThresholdScope::default_);
    return t;
}

std::vector<EcdfPoint> ecdf(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    std::vector<EcdfPoint> out;
    out.reserve(values.size());
    const double n = static_cast<double>(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        out.push_back({values[i], static_cast<double>(i + 1) / n});
    }
    return out;
}

nlohmann::ordered_json to_json(const ThresholdEstimate& t) {
    return {{"seconds", t.seconds},
            {"scope", to_string(t.scope)},
            {"source_ads", t.source_ads},
            {"statistic", to_string(t.statistic)}};
}

ThresholdEstimate threshold_from_json(const nlohmann::json& j) {
    try {
        ThresholdEstimate t;
        t.seconds = j.at("seconds").get<double>();
        const auto scope = parse_threshold_scope(j.at("scope").get<std::string>());
        if (!scope) throw Error(ErrorKind::schema, "unknown threshold scope");
        t.scope = *scope;
        t.source_ads = j.value("source_ads", std::size_t{0});
        const auto stat = parse_threshold_statistic(j.value("statistic", std::string("median")));
        if (!stat) throw Error(ErrorKind::schema, "unknown threshold statistic");
        t.statistic = *stat;
        if (!(t.seconds > 0.0) || !std::isfinite(t.seconds)) {
            throw Error(ErrorKind::schema, "threshold seconds must be positive and finite");
        }
        return t;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::schema, std::string("bad threshold json: ") + e.what());
    }
}

nlohmann::ordered_json to_json(const ThresholdReport& report) {
    nlohmann::ordered_json j;
    j["scope"] = report.mode == "pivot" ? "pivot_global" : "per_app";
    j["mode"] = report.mode;
    j["statistic"] = to_string(report.statistic);
    j["aggregate"] = to_string(report.aggregate);
    if (report.pivot_app) j["pivot_app"] = *report.pivot_app;
    auto list = nlohmann::ordered_json::array();
    for (const auto& [app, t] : report.thresholds) {
        list.push_back({{"app_id", app}, {"seconds", t.seconds}, {"source_ads", t.source_ads}, {"scope", to_string(t.scope)}});
    }
    j["thresholds"] = std::move(list);
    j["default"] = to_json(report.default_threshold);
    return j;
}

ThresholdReport threshold_report_from_json(const nlohmann::json& j) {
    try {
        ThresholdReport r;
        r.mode = j.value("mode", std::string("per-app"));
        if (auto s = parse_threshold_statistic(j.value("statistic", std::string("median")))) r.statistic = *s;
        if (auto a = parse_aggregate(j.value("aggregate", std::string("median")))) r.aggregate = *a;
        if (j.contains("pivot_app") && j["pivot_app"].is_string()) r.pivot_app = j["pivot_app"].get<std::string>();
        for (const auto& e : j.at("thresholds")) {
            ThresholdEstimate t = threshold_from_json(e);
            t.statistic = r.statistic;
            r.thresholds[e.at("app_id").get<std::string>()] = t;
        }
        r.default_threshold = threshold_from_json(j.at("default"));
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::schema, std::string("bad threshold report: ") + e.what());
    }
}

}  // namespace dwell
