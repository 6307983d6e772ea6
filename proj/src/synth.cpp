#include "dwellclick/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

#include "dwellclick/error.hpp"
#include "dwellclick/rng.hpp"

namespace dwell {

namespace {

constexpr std::int64_t kTimestampSpan = 30 * 24 * 3600;

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<double> numbers(const std::string& value, std::size_t lineno) {
    std::istringstream ss(value);
    std::vector<double> out;
    std::string tok;
    while (ss >> tok) {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || ptr != tok.data() + tok.size()) {
            throw Error(ErrorKind::validation, "line " + std::to_string(lineno) + ": '" + tok + "' is not a number");
        }
        out.push_back(v);
    }
    return out;
}

double one_number(const std::string& value, std::size_t lineno) {
    const auto v = numbers(value, lineno);
    if (v.size() != 1) throw Error(ErrorKind::validation, "line " + std::to_string(lineno) + ": expected one number");
    return v[0];
}

std::size_t count_value(double v, std::size_t lineno) {
    if (!(v >= 0.0) || v != std::floor(v)) {
        throw Error(ErrorKind::validation, "line " + std::to_string(lineno) + ": expected a non-negative integer");
    }
    return static_cast<std::size_t>(v);
}

std::array<double, 3> triple(const std::string& value, std::size_t lineno) {
    const auto v = numbers(value, lineno);
    if (v.size() != 3) throw Error(ErrorKind::validation, "line " + std::to_string(lineno) + ": expected three numbers");
    return {v[0], v[1], v[2]};
}

std::string padded(std::size_t i, int width) {
    std::string s = std::to_string(i);
    if (static_cast<int>(s.size()) < width) s.insert(0, static_cast<std::size_t>(width) - s.size(), '0');
    return s;
}

double logistic(double eta) {
    if (eta >= 0.0) return 1.0 / (1.0 + std::exp(-eta));
    const double e = std::exp(eta);
    return e / (1.0 + e);
}

}  // namespace

std::vector<std::string> ScenarioSpec::violations() const {
    std::vector<std::string> v;
    if (apps.empty()) v.push_back("scenario has no [app] sections");
    for (std::size_t s = 0; s < apps.size(); ++s) {
        const auto& a = apps[s];
        const std::string where = "segment " + std::to_string(s) + " (" + a.app_id + "): ";
        if (a.app_id.empty()) v.push_back(where + "empty app id");
        if (a.ads == 0) v.push_back(where + "ads must be positive");
        if (a.clicks_low == 0 || a.clicks_high < a.clicks_low) v.push_back(where + "clicks_per_ad range is invalid");
        double sum = 0.0;
        for (double w : a.weights) {
            if (!(w >= 0.0)) v.push_back(where + "weights must be non-negative");
            sum += w;
        }
        if (std::fabs(sum - 1.0) > 1e-12) v.push_back(where + "weights must sum to 1");
        std::optional<double> prev_mu;
        for (std::size_t j = 0; j < 3; ++j) {
            if (a.weights[j] <= 0.0) continue;
            if (!(a.sigma2s[j] > 0.0)) v.push_back(where + "sigma2 must be positive where weight > 0");
            if (!std::isfinite(a.mus[j])) v.push_back(where + "mus must be finite");
            if (prev_mu && !(a.mus[j] > *prev_mu)) v.push_back(where + "mus must increase where weight > 0");
            prev_mu = a.mus[j];
        }
        if (!(a.cpc_low >= 0.0) || a.cpc_high < a.cpc_low) v.push_back(where + "cpc range is invalid");
        if (!(a.mu1_jitter >= 0.0)) v.push_back(where + "mu1_jitter must be non-negative");
    }
    return v;
}

ScenarioSpec parse_scenario(std::istream& in) {
    ScenarioSpec spec;
    SegmentSpec* seg = nullptr;
    ConversionSpec conv;
    bool have_b0 = false, have_b1 = false;
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.rfind("[app ", 0) != 0) {
                throw Error(ErrorKind::validation, "line " + std::to_string(lineno) + ": expected [app <id>]");
            }
            spec.apps.emplace_back();
            seg = &spec.apps.back();
            seg->app_id = trim(line.substr(5, line.size() - 6));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorKind::validation, "line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!seg) {
            if (key == "seed") {
                std::uint64_t s = 0;
                const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), s);
                if (ec != std::errc() || ptr != value.data() + value.size()) {
                    throw Error(ErrorKind::validation, "line " + std::to_string(lineno) + ": bad seed");
                }
                spec.seed = s;
            } else if (key == "start_timestamp") {
                spec.start_timestamp = static_cast<std::int64_t>(one_number(value, lineno));
            } else if (key == "conversion.beta0") {
                conv.beta0 = one_number(value, lineno);
                have_b0 = true;
            } else if (key == "conversion.beta1") {
                conv.beta1 = one_number(value, lineno);
                have_b1 = true;
            } else {
                throw Error(ErrorKind::validation, "line " + std::to_string(lineno) + ": unknown key '" + key + "'");
            }
            continue;
        }
        if (key == "platform") {
            const auto p = parse_platform(value);
            if (!p) throw Error(ErrorKind::validation, "line " + std::to_string(lineno) + ": unknown platform");
            seg->platform = *p;
        } else if (key == "ads") {
            seg->ads = count_value(one_number(value, lineno), lineno);
        } else if (key == "clicks_per_ad") {
            const auto v = numbers(value, lineno);
            if (v.empty() || v.size() > 2) {
                throw Error(ErrorKind::validation, "line " + std::to_string(lineno) + ": clicks_per_ad takes N or LOW HIGH");
            }
            seg->clicks_low = count_value(v[0], lineno);
            seg->clicks_high = count_value(v.back(), lineno);
        } else if (key == "weights") {
            seg->weights = triple(value, lineno);
        } else if (key == "mus") {
            seg->mus = triple(value, lineno);
        } else if (key == "sigma2s") {
            seg->sigma2s = triple(value, lineno);
        } else if (key == "cpc") {
            const auto v = numbers(value, lineno);
            if (v.empty() || v.size() > 2) {
                throw Error(ErrorKind::validation, "line " + std::to_string(lineno) + ": cpc takes VALUE or LOW HIGH");
            }
            seg->cpc_low = v[0];
            seg->cpc_high = v.back();
        } else if (key == "mu1_jitter") {
            seg->mu1_jitter = one_number(value, lineno);
        } else {
            throw Error(ErrorKind::validation, "line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }
    if (have_b0 != have_b1) throw Error(ErrorKind::validation, "conversion needs both beta0 and beta1");
    if (have_b0) spec.conversion = conv;
    return spec;
}

ScenarioSpec load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, "cannot open scenario " + path);
    return parse_scenario(in);
}

GeneratedLog generate(const ScenarioSpec& spec) {
    if (const auto v = spec.violations(); !v.empty()) {
        std::string msg = "invalid scenario:";
        for (const auto& s : v) msg += "\n  " + s;
        throw Error(ErrorKind::validation, msg);
    }

    const rng::Stream root(spec.seed);
    struct PendingAd {
        AdTruth truth;
        std::vector<ClickRecord> clicks;
    };
    std::vector<PendingAd> ads;

    for (std::size_t s = 0; s < spec.apps.size(); ++s) {
        const auto& seg = spec.apps[s];
        const rng::Stream seg_stream = root.split(s);
        for (std::size_t a = 0; a < seg.ads; ++a) {
            const rng::Stream ad_stream = seg_stream.split(a);
            const rng::Stream ad_meta = ad_stream.split(~std::uint64_t{0});

            PendingAd ad;
            auto& t = ad.truth;
            t.ad_id = seg.app_id + "-s" + padded(s, 2) + "-ad" + padded(a, 5);
            t.app_id = seg.app_id;
            t.platform = seg.platform;
            t.weights = seg.weights;
            t.mus = seg.mus;
            t.sigma2s = seg.sigma2s;
            if (seg.mu1_jitter > 0.0) t.mus[0] += seg.mu1_jitter * ad_meta.normal(0, 0);
            const double cpc_raw = seg.cpc_low + (seg.cpc_high - seg.cpc_low) * ad_meta.uniform(1, 0);
            t.cpc = std::round(cpc_raw * 100.0) / 100.0;
            const std::size_t span = seg.clicks_high - seg.clicks_low + 1;
            const auto clicks = seg.clicks_low +
                                std::min(span - 1, static_cast<std::size_t>(ad_meta.uniform(2, 0) * static_cast<double>(span)));

            t.labels.reserve(clicks);
            ad.clicks.reserve(clicks);
            for (std::size_t i = 0; i < clicks; ++i) {
                const double u = ad_stream.uniform(i, 0);
                std::size_t comp = 0;
                double cum = 0.0;
                for (std::size_t j = 0; j < 3; ++j) {
                    if (seg.weights[j] <= 0.0) continue;
                    comp = j;
                    cum += seg.weights[j];
                    if (u < cum) break;
                }
                const double log_dwell = t.mus[comp] + std::sqrt(t.sigma2s[comp]) * ad_stream.normal(i, 1);
                ClickRecord rec;
                rec.ad_id = t.ad_id;
                rec.app_id = t.app_id;
                rec.platform = t.platform;
                rec.timestamp = spec.start_timestamp +
                                static_cast<std::int64_t>(ad_stream.uniform(i, 3) * static_cast<double>(kTimestampSpan));
                rec.dwell_seconds = std::exp(log_dwell);
                rec.cpc = t.cpc;
                if (spec.conversion) {
                    const double p = logistic(spec.conversion->beta0 + spec.conversion->beta1 * log_dwell);
                    rec.converted = ad_stream.uniform(i, 2) < p;
                }
                t.labels.push_back(static_cast<std::uint8_t>(comp + 1));
                ad.clicks.push_back(std::move(rec));
            }
            ads.push_back(std::move(ad));
        }
    }

    std::stable_sort(ads.begin(), ads.end(), [](const PendingAd& x, const PendingAd& y) {
        if (x.truth.app_id != y.truth.app_id) return x.truth.app_id < y.truth.app_id;
        return x.truth.ad_id < y.truth.ad_id;
    });

    GeneratedLog out;
    out.truth.seed = spec.seed;
    out.truth.rng = rng::kAlgorithmName;
    out.truth.conversion = spec.conversion;
    for (auto& ad : ads) {
        out.clicks.insert(out.clicks.end(), std::make_move_iterator(ad.clicks.begin()),
                          std::make_move_iterator(ad.clicks.end()));
        out.truth.ads.push_back(std::move(ad.truth));
    }
    return out;
}

std::vector<std::uint8_t> click_labels(const GroundTruth& truth) {
    std::vector<std::uint8_t> out;
    for (const auto& ad : truth.ads) out.insert(out.end(), ad.labels.begin(), ad.labels.end());
    return out;
}

double oracle_accidental_rate(const GroundTruth& truth, const std::string& app_id) {
    std::size_t total = 0, first = 0;
    bool found = false;
    for (const auto& ad : truth.ads) {
        if (ad.app_id != app_id) continue;
        found = true;
        total += ad.labels.size();
        first += static_cast<std::size_t>(std::count(ad.labels.begin(), ad.labels.end(), std::uint8_t{1}));
    }
    if (!found) throw Error(ErrorKind::lookup, "app '" + app_id + "' is not in the ground truth");
    return total == 0 ? 0.0 : static_cast<double>(first) / static_cast<double>(total);
}

nlohmann::ordered_json to_json(const GroundTruth& truth) {
    nlohmann::ordered_json j;
    j["rng"] = truth.rng;
    j["seed"] = truth.seed;
    if (truth.conversion) {
        j["conversion"] = {{"beta0", truth.conversion->beta0}, {"beta1", truth.conversion->beta1}};
    }
    std::map<std::string, std::pair<std::size_t, std::size_t>> per_app;
    auto ads = nlohmann::ordered_json::array();
    for (const auto& ad : truth.ads) {
        std::string labels;
        labels.reserve(ad.labels.size());
        for (auto l : ad.labels) labels.push_back(static_cast<char>('0' + l));
        auto& pa = per_app[ad.app_id];
        pa.first += ad.labels.size();
        pa.second += static_cast<std::size_t>(std::count(ad.labels.begin(), ad.labels.end(), std::uint8_t{1}));
        ads.push_back({{"ad_id", ad.ad_id},
                       {"app_id", ad.app_id},
                       {"platform", to_string(ad.platform)},
                       {"weights", ad.weights},
                       {"mus", ad.mus},
                       {"sigma2s", ad.sigma2s},
                       {"cpc", ad.cpc},
                       {"clicks", ad.labels.size()},
                       {"labels", labels}});
    }
    auto apps = nlohmann::ordered_json::array();
    for (const auto& [app, c] : per_app) {
        apps.push_back({{"app_id", app},
                        {"clicks", c.first},
                        {"accidental_fraction", c.first ? static_cast<double>(c.second) / static_cast<double>(c.first) : 0.0}});
    }
    j["apps"] = std::move(apps);
    j["ads"] = std::move(ads);
    return j;
}

GroundTruth ground_truth_from_json(const nlohmann::json& j) {
    try {
        GroundTruth t;
        t.rng = j.at("rng").get<std::string>();
        t.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("conversion")) {
            t.conversion = ConversionSpec{j["conversion"].at("beta0").get<double>(), j["conversion"].at("beta1").get<double>()};
        }
        for (const auto& a : j.at("ads")) {
            AdTruth ad;
            ad.ad_id = a.at("ad_id").get<std::string>();
            ad.app_id = a.at("app_id").get<std::string>();
            ad.platform = parse_platform(a.at("platform").get<std::string>()).value_or(Platform::other);
            ad.weights = a.at("weights").get<std::array<double, 3>>();
            ad.mus = a.at("mus").get<std::array<double, 3>>();
            ad.sigma2s = a.at("sigma2s").get<std::array<double, 3>>();
            ad.cpc = a.at("cpc").get<double>();
            for (char c : a.at("labels").get<std::string>()) ad.labels.push_back(static_cast<std::uint8_t>(c - '0'));
            t.ads.push_back(std::move(ad));
        }
        return t;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::schema, std::string("bad ground truth json: ") + e.what());
    }
}

}  // namespace dwell
