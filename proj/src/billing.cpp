#include "dwellclick/billing.hpp"

#include <algorithm>
#include <cmath>

#include "dwellclick/error.hpp"
#include "dwellclick/exact_sum.hpp"
#include "dwellclick/format.hpp"

namespace dwell {

namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

void require_clicks(const ClickCounts& c) {
    if (c.total_clicks == 0) {
        throw Error(ErrorKind::insufficient_data, "app '" + c.app_id + "' has no clicks");
    }
    if (c.non_accidental_clicks > c.total_clicks) {
        throw Error(ErrorKind::contract, "app '" + c.app_id + "' has more non-accidental clicks than clicks");
    }
}

}  // namespace

CountResult count_clicks(const std::vector<ClickRecord>& records, const ThresholdMap& thresholds,
                         const ThresholdEstimate& fallback, std::size_t min_clicks) {
    CountResult out;
    std::map<std::pair<std::string, std::string>, std::size_t> per_pair;
    for (const auto& r : records) {
        auto& c = out.apps[r.app_id];
        c.app_id = r.app_id;
        ++c.total_clicks;
        if (!is_accidental(r.dwell_seconds, threshold_for(r.app_id, thresholds, fallback))) {
            ++c.non_accidental_clicks;
        }
        ++per_pair[{r.ad_id, r.app_id}];
    }
    for (auto& [app, c] : out.apps) c.insufficient = c.total_clicks < min_clicks;
    for (const auto& [key, n] : per_pair) {
        ++out.ad_pairs[key.second];
        if (n < min_clicks) ++out.ad_pairs_below_floor[key.second];
    }
    return out;
}

const char* to_string(IntervalMethod m) {
    switch (m) {
        case IntervalMethod::mle: return "mle";
        case IntervalMethod::normal_approx: return "normal";
        case IntervalMethod::agresti_coull: return "agresti-coull";
    }
    return "mle";
}

std::optional<IntervalMethod> parse_interval_method(std::string_view text) {
    if (text == "mle") return IntervalMethod::mle;
    if (text == "normal" || text == "normal_approx") return IntervalMethod::normal_approx;
    if (text == "agresti-coull" || text == "agresti_coull") return IntervalMethod::agresti_coull;
    return std::nullopt;
}

NacrEstimate nacr_mle(const ClickCounts& c) {
    require_clicks(c);
    const double p = static_cast<double>(c.non_accidental_clicks) / static_cast<double>(c.total_clicks);
    return {c.app_id, p, p, p, IntervalMethod::mle, c.total_clicks, 0.0};
}

NacrEstimate nacr_normal_interval(const ClickCounts& c, double z) {
    require_clicks(c);
    const double n = static_cast<double>(c.total_clicks);
    const double p = static_cast<double>(c.non_accidental_clicks) / n;
    const double half = z * std::sqrt(p * (1.0 - p) / n);
    return {c.app_id, p, clamp01(p - half), clamp01(p + half), IntervalMethod::normal_approx, c.total_clicks, z};
}

NacrEstimate nacr_agresti_coull(const ClickCounts& c, double z) {
    require_clicks(c);
    const double z2 = z * z;
    const double n_tilde = static_cast<double>(c.total_clicks) + z2;
    const double p_tilde = (static_cast<double>(c.non_accidental_clicks) + 0.5 * z2) / n_tilde;
    const double half = z * std::sqrt(p_tilde * (1.0 - p_tilde) / n_tilde);
    return {c.app_id,        p_tilde,        clamp01(p_tilde - half), clamp01(p_tilde + half),
            IntervalMethod::agresti_coull, c.total_clicks, z};
}

NacrEstimate estimate_nacr(const ClickCounts& c, IntervalMethod method, double z) {
    switch (method) {
        case IntervalMethod::mle: return nacr_mle(c);
        case IntervalMethod::normal_approx: return nacr_normal_interval(c, z);
        case IntervalMethod::agresti_coull: return nacr_agresti_coull(c, z);
    }
    return nacr_mle(c);
}

std::string select_pivot(const std::vector<NacrEstimate>& estimates) {
    if (estimates.empty()) throw Error(ErrorKind::contract, "pivot selection over an empty list");
    const auto* best = &estimates.front();
    for (const auto& e : estimates) {
        if (e.method != best->method) throw Error(ErrorKind::contract, "pivot candidates mix estimation methods");
        if (e.point > best->point || (e.point == best->point && e.n > best->n) ||
            (e.point == best->point && e.n == best->n && e.app_id < best->app_id)) {
            best = &e;
        }
    }
    return best->app_id;
}

double discount_factor(const NacrEstimate& app, const NacrEstimate& pivot, bool guarded) {
    if (app.method != pivot.method) throw Error(ErrorKind::contract, "discount factor across estimation methods");
    if (!(pivot.ucb > 0.0)) {
        throw Error(ErrorKind::undefined_pivot, "pivot '" + pivot.app_id + "' has a zero upper confidence bound");
    }
    const double upper = app.ucb / pivot.ucb;
    if (!guarded) return upper;
    return std::max(app.lcb / pivot.ucb, std::min(upper, 1.0));
}

double DiscountReport::factor_for(const std::string& app_id) const {
    for (const auto& e : entries) {
        if (e.app_id == app_id) return e.discount_factor.value_or(1.0);
    }
    return 1.0;
}

DiscountReport build_discount_report(const CountResult& counts, const DiscountOptions& options,
                                     const ThresholdEstimate& threshold_used) {
    if (options.method != IntervalMethod::mle && !(options.z > 0.0)) {
        throw Error(ErrorKind::contract, "z must be positive");
    }
    std::vector<NacrEstimate> candidates;
    for (const auto& [app, c] : counts.apps) {
        if (!c.insufficient && c.total_clicks > 0) candidates.push_back(estimate_nacr(c, options.method, options.z));
    }
    if (candidates.empty()) throw Error(ErrorKind::insufficient_data, "no app meets the click floor; pivot undetermined");

    DiscountReport report;
    report.method = options.method;
    report.z = options.z;
    report.threshold_used = threshold_used;
    report.pivot_app = select_pivot(candidates);
    report.pivot_nacr = *std::find_if(candidates.begin(), candidates.end(),
                                      [&](const auto& e) { return e.app_id == report.pivot_app; });

    std::optional<double> largest_factor;
    for (const auto& [app, c] : counts.apps) {
        if (app == report.pivot_app) continue;
        DiscountEntry entry;
        entry.app_id = app;
        if (c.insufficient || c.total_clicks == 0) {
            entry.flags.push_back("insufficient_data");
            if (c.total_clicks > 0) entry.nacr = estimate_nacr(c, options.method, options.z);
            entry.nacr.app_id = app;
            entry.nacr.n = c.total_clicks;
        } else {
            entry.nacr = estimate_nacr(c, options.method, options.z);
            const double f = discount_factor(entry.nacr, report.pivot_nacr, options.guarded);
            entry.discount_factor = f;
            if (f > 1.0) {
                entry.flags.push_back("pivot_update_recommended");
                report.pivot_update_recommended = true;
            }
            largest_factor = std::max(largest_factor.value_or(f), f);
        }
        report.entries.push_back(std::move(entry));
    }

    if (options.pivot_self_discount && largest_factor) {
        const auto& pc = counts.apps.at(report.pivot_app);
        const std::size_t accidental = pc.total_clicks - pc.non_accidental_clicks;
        if (accidental > options.pivot_alert_clicks) {
            DiscountEntry entry;
            entry.app_id = report.pivot_app;
            entry.nacr = report.pivot_nacr;
            entry.discount_factor = std::min(*largest_factor, 1.0);
            entry.flags.push_back("pivot_self_discount");
            report.entries.push_back(std::move(entry));
        }
    }
    return report;
}

RevenueImpact revenue_impact(const std::vector<ClickRecord>& records, const DiscountReport& report,
                             const ThresholdMap& thresholds, const ThresholdEstimate& fallback) {
    std::map<std::string, double> factors;
    for (const auto& e : report.entries) factors[e.app_id] = e.discount_factor.value_or(1.0);

    RevenueImpact out;
    ExactSum charge, discard, smooth;
    for (const auto& r : records) {
        if (!r.cpc) {
            ++out.skipped_missing_cpc;
            continue;
        }
        ++out.billed_clicks;
        const double cpc = *r.cpc;
        charge.add(cpc);
        if (is_accidental(r.dwell_seconds, threshold_for(r.app_id, thresholds, fallback))) {
            ++out.accidental_clicks;
            const auto it = factors.find(r.app_id);
            smooth.add(adjusted_cpc(cpc, it == factors.end() ? 1.0 : it->second));
        } else {
            discard.add(cpc);
            smooth.add(cpc);
        }
    }
    out.chargeall = charge.value();
    out.discard = discard.value();
    out.smooth = smooth.value();
    if (out.chargeall > out.discard) {
        out.mitigation_ratio = 1.0 - (out.chargeall - out.smooth) / (out.chargeall - out.discard);
    }
    return out;
}

nlohmann::ordered_json to_json(const NacrEstimate& e) {
    return {{"point", e.point}, {"lcb", e.lcb}, {"ucb", e.ucb}, {"n", e.n}};
}

nlohmann::ordered_json to_json(const DiscountReport& report, const std::optional<RevenueImpact>& impact) {
    nlohmann::ordered_json j;
    j["pivot_app"] = report.pivot_app;
    j["method"] = to_string(report.method);
    j["z"] = report.z;
    j["threshold_used"] = {{"seconds", report.threshold_used.seconds},
                           {"scope", to_string(report.threshold_used.scope)},
                           {"source_ads", report.threshold_used.source_ads}};
    j["pivot_nacr"] = to_json(report.pivot_nacr);
    j["pivot_update_recommended"] = report.pivot_update_recommended;
    auto entries = nlohmann::ordered_json::array();
    for (const auto& e : report.entries) {
        nlohmann::ordered_json je;
        je["app_id"] = e.app_id;
        je["nacr"] = to_json(e.nacr);
        je["discount_factor"] = e.discount_factor ? nlohmann::ordered_json(*e.discount_factor) : nullptr;
        je["flags"] = e.flags;
        entries.push_back(std::move(je));
    }
    j["entries"] = std::move(entries);
    if (impact) {
        j["impact"] = {{"chargeall", round_to(impact->chargeall, 6)},
                       {"discard", round_to(impact->discard, 6)},
                       {"smooth", round_to(impact->smooth, 6)},
                       {"mitigation_ratio", impact->mitigation_ratio
                                                ? nlohmann::ordered_json(round_to(*impact->mitigation_ratio, 6))
                                                : nlohmann::ordered_json(nullptr)},
                       {"billed_clicks", impact->billed_clicks},
                       {"accidental_clicks", impact->accidental_clicks},
                       {"skipped_missing_cpc", impact->skipped_missing_cpc}};
    }
    return j;
}

}  // namespace dwell
