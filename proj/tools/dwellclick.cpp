// dwellclick: command-line front end for the dwell-time click pipeline.

#include <openssl/evp.h>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dwellclick/billing.hpp"
#include "dwellclick/click_log.hpp"
#include "dwellclick/error.hpp"
#include "dwellclick/format.hpp"
#include "dwellclick/pipeline.hpp"
#include "dwellclick/rng.hpp"
#include "dwellclick/synth.hpp"
#include "dwellclick/validation.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace dwell;

namespace {

constexpr const char* kVersion = "0.1.0";

enum ExitCode { kOk = 0, kUsage = 2, kData = 3, kFitFailure = 4 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot read " + path + " for hashing");
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    std::vector<char> buf(1 << 16);
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, md, &len);
    EVP_MD_CTX_free(ctx);
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int{md[i]};
    return hex.str();
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

class Manifest {
  public:
    Manifest(std::string command, const CLI::App& sub) : command_(std::move(command)), started_(utc_now()) {
        for (const auto* opt : sub.get_options()) {
            const std::string name = opt->get_single_name();
            if (name.empty() || name == "help") continue;
            if (opt->get_expected_max() == 0) {
                config_[name] = opt->count() > 0;
            } else if (opt->count() > 0) {
                const auto& r = opt->results();
                config_[name] = r.size() == 1 ? ordered_json(r.front()) : ordered_json(r);
            } else {
                config_[name] = opt->get_default_str();
            }
        }
    }
    void input(const std::string& path) { inputs_.push_back({{"path", path}, {"sha256", sha256_file(path)}}); }
    void output(const std::string& path) { outputs_.push_back({{"path", path}, {"sha256", sha256_file(path)}}); }
    void seed(std::uint64_t s) { seed_ = s; }
    void note(const std::string& key, ordered_json value) { notes_[key] = std::move(value); }

    void write(const std::string& path) const {
        ordered_json j;
        j["command"] = command_;
        j["tool_version"] = kVersion;
        j["config"] = config_;
        j["seed"] = seed_ ? ordered_json(*seed_) : ordered_json(nullptr);
        j["inputs"] = inputs_;
        j["outputs"] = outputs_;
        if (!notes_.empty()) j["notes"] = notes_;
        j["started_at"] = started_;
        j["finished_at"] = utc_now();
        std::ofstream out(path);
        if (!out) throw Error(ErrorKind::io, "cannot write manifest " + path);
        out << j.dump(2) << '\n';
    }

  private:
    std::string command_;
    std::string started_;
    ordered_json config_ = ordered_json::object();
    ordered_json inputs_ = ordered_json::array();
    ordered_json outputs_ = ordered_json::array();
    ordered_json notes_ = ordered_json::object();
    std::optional<std::uint64_t> seed_;
};

void write_json(const std::string& path, const ordered_json& j) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::io, "cannot write " + path);
    out << j.dump(2) << '\n';
}

ordered_json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, "cannot open " + path);
    try {
        return ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::schema, path + ": " + e.what());
    }
}

LogFormat format_for(const std::string& flag, const std::string& path) {
    if (!flag.empty()) {
        const auto f = parse_log_format(flag);
        if (!f) throw UsageError("unknown format '" + flag + "'");
        return *f;
    }
    return fs::path(path).extension() == ".jsonl" ? LogFormat::jsonl : LogFormat::csv;
}

std::vector<ClickRecord> load_clicks(const std::string& path, LogFormat fmt, Manifest& m) {
    auto log = read_click_log(path, fmt);
    m.input(path);
    if (!log.rejections.empty()) {
        std::cerr << "warning: " << log.rejections.size() << " malformed row(s) skipped in " << path << " (first: line "
                  << log.rejections.front().line << ", " << log.rejections.front().reason << ")\n";
        m.note("rejected_rows", log.rejections.size());
    }
    return log.records;
}

std::string sibling(const std::string& out, const std::string& suffix) { return out + suffix; }

struct CommonOpts {
    std::string input, out, format;
    bool summary = false;
};

struct FitOpts {
    std::uint64_t seed = 0;
    int restarts = 10;
    int max_iters = 500;
    std::string criterion = "aic";
    std::size_t min_clicks = 100;
    double outlier_cap = 600.0;
    int threads = 1;
};

struct ThresholdOpts {
    std::string mode = "per-app";
    std::string pivot_app;
    std::string aggregate = "median";
    std::string statistic = "median";
    double default_threshold = kFallbackThresholdSeconds;
    std::size_t min_ads = 1;
    std::string ecdf;
};

struct DiscountOpts {
    std::string thresholds;
    std::string method = "agresti-coull";
    double z = kDefaultZ;
    std::size_t min_clicks = 40;
    bool unguarded = false;
    bool pivot_self_discount = false;
    std::size_t pivot_alert_clicks = 0;
};

void add_fit_options(CLI::App* sub, FitOpts& o) {
    sub->add_option("--seed", o.seed, "seed for EM restarts")->capture_default_str();
    sub->add_option("--restarts", o.restarts, "EM restarts per K")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--max-iters", o.max_iters, "EM iteration cap")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--criterion", o.criterion, "aic or bic")->capture_default_str()->check(CLI::IsMember({"aic", "bic"}));
    sub->add_option("--min-clicks", o.min_clicks, "clicks an (ad, app) pair needs to be fitted")->capture_default_str();
    sub->add_option("--outlier-cap", o.outlier_cap, "drop dwell above this many seconds")->capture_default_str();
    sub->add_option("--threads", o.threads, "threads for EM restarts")->capture_default_str()->check(CLI::PositiveNumber);
}

void add_threshold_options(CLI::App* sub, ThresholdOpts& o) {
    sub->add_option("--mode", o.mode, "pivot or per-app")->capture_default_str()->check(CLI::IsMember({"pivot", "per-app"}));
    sub->add_option("--pivot-app", o.pivot_app, "app whose ads set the single threshold in pivot mode");
    sub->add_option("--aggregate", o.aggregate, "median or mean of per-ad thresholds")
        ->capture_default_str()
        ->check(CLI::IsMember({"median", "mean"}));
    sub->add_option("--statistic", o.statistic, "per-ad statistic of the first component: median or mean")
        ->capture_default_str()
        ->check(CLI::IsMember({"median", "mean"}));
    sub->add_option("--default-threshold", o.default_threshold, "fallback threshold in seconds")->capture_default_str();
    sub->add_option("--min-ads", o.min_ads, "three-component ads an app needs for its own threshold")
        ->capture_default_str();
}

void add_discount_options(CLI::App* sub, DiscountOpts& o) {
    sub->add_option("--method", o.method, "mle, normal or agresti-coull")
        ->capture_default_str()
        ->check(CLI::IsMember({"mle", "normal", "agresti-coull"}));
    sub->add_option("--z", o.z, "normal quantile for confidence bounds")->capture_default_str();
    sub->add_option("--min-clicks", o.min_clicks, "clicks an app needs for a discount factor")->capture_default_str();
    sub->add_flag("--unguarded", o.unguarded, "use ucb(app)/ucb(pivot) without the lower-bound guard");
    sub->add_flag("--pivot-self-discount", o.pivot_self_discount, "let the pivot inherit the largest factor");
    sub->add_option("--pivot-alert-clicks", o.pivot_alert_clicks, "accidental pivot clicks that trigger self-discount")
        ->capture_default_str();
}

FitConfig fit_config(const FitOpts& o) {
    FitConfig c;
    c.seed = o.seed;
    c.restarts = o.restarts;
    c.max_iters = o.max_iters;
    c.criterion = *parse_criterion(o.criterion);
    c.threads = o.threads;
    return c;
}

IngestConfig ingest_config(const FitOpts& o) {
    IngestConfig c;
    c.outlier_cap_seconds = o.outlier_cap;
    c.min_clicks_threshold = o.min_clicks;
    return c;
}

ThresholdPolicy threshold_policy(const ThresholdOpts& o) {
    ThresholdPolicy p;
    p.aggregate = *parse_aggregate(o.aggregate);
    p.per_ad_statistic = *parse_threshold_statistic(o.statistic);
    p.default_threshold_seconds = o.default_threshold;
    p.min_ads = o.min_ads;
    return p;
}

DiscountOptions discount_options(const DiscountOpts& o) {
    DiscountOptions d;
    d.method = *parse_interval_method(o.method);
    d.z = o.z;
    d.guarded = !o.unguarded;
    d.pivot_self_discount = o.pivot_self_discount;
    d.pivot_alert_clicks = o.pivot_alert_clicks;
    return d;
}

ThresholdReport make_thresholds(const ModelMap& models, const ThresholdOpts& o) {
    const auto mode = o.mode == "pivot" ? ThresholdMode::pivot : ThresholdMode::per_app;
    if (mode == ThresholdMode::pivot && o.pivot_app.empty()) throw UsageError("--mode pivot requires --pivot-app");
    return build_threshold_report(models, threshold_policy(o), mode,
                                  o.pivot_app.empty() ? std::nullopt : std::optional<std::string>(o.pivot_app));
}

ordered_json ecdf_json(const ModelMap& models, const ThresholdPolicy& policy) {
    auto points = [](const std::vector<ThresholdEstimate>& est) {
        std::vector<double> secs;
        for (const auto& e : est) secs.push_back(e.seconds);
        auto arr = ordered_json::array();
        for (const auto& p : ecdf(secs)) arr.push_back({p.seconds, p.cumulative_fraction});
        return arr;
    };
    ordered_json j;
    j["all"] = points(per_ad_thresholds(models, policy));
    std::set<std::string> apps;
    for (const auto& [key, m] : models) apps.insert(key.second);
    for (const auto& app : apps) j["apps"][app] = points(per_ad_thresholds(models, policy, app));
    return j;
}

void print_fit_summary(const GroupFits& fits) {
    std::cout << "groups fitted " << fits.models.size() << ", failed " << fits.failures.size() << '\n';
    for (int k = 1; k <= 3; ++k) {
        std::cout << "  K=" << k << ": " << fits.k_counts[static_cast<std::size_t>(k)] << " ads ("
                  << format_double(round_to(fits.k_percent(k), 1)) << "%)\n";
    }
}

void print_threshold_summary(const ThresholdReport& r) {
    for (const auto& [app, t] : r.thresholds) {
        std::cout << "  " << app << ": " << format_double(round_to(t.seconds, 3)) << " s (" << to_string(t.scope)
                  << ", " << t.source_ads << " ads)\n";
    }
    std::cout << "  default: " << format_double(round_to(r.default_threshold.seconds, 3)) << " s ("
              << to_string(r.default_threshold.scope) << ")\n";
}

void print_discount_summary(const DiscountReport& r, const RevenueImpact& imp) {
    std::cout << "pivot " << r.pivot_app << " nacr " << format_double(round_to(r.pivot_nacr.point, 4)) << '\n';
    for (const auto& e : r.entries) {
        std::cout << "  " << e.app_id << ": "
                  << (e.discount_factor ? format_double(round_to(*e.discount_factor, 4)) : std::string("n/a"));
        for (const auto& f : e.flags) std::cout << " [" << f << "]";
        std::cout << '\n';
    }
    std::cout << "revenue chargeall " << format_double(round_to(imp.chargeall, 2)) << ", smooth "
              << format_double(round_to(imp.smooth, 2)) << ", discard " << format_double(round_to(imp.discard, 2));
    if (imp.mitigation_ratio) std::cout << ", mitigation " << format_double(round_to(*imp.mitigation_ratio, 4));
    std::cout << '\n';
}

ordered_json filter_stats(const std::vector<ClickRecord>& all, const FilterResult& r) {
    std::map<std::string, std::pair<std::size_t, std::size_t>> per_app;
    for (const auto& c : r.kept) ++per_app[c.app_id].first;
    for (const auto& c : r.removed) ++per_app[c.app_id].second;
    ordered_json j;
    j["total"] = all.size();
    j["kept"] = r.kept.size();
    j["removed"] = r.removed.size();
    j["removed_fraction"] = all.empty() ? 0.0 : static_cast<double>(r.removed.size()) / static_cast<double>(all.size());
    for (const auto& [app, kr] : per_app) j["apps"][app] = {{"kept", kr.first}, {"removed", kr.second}};
    return j;
}

ValidationReport run_validation(const std::vector<ClickRecord>& records, double cap) {
    const auto data = labeled_dwell(records, cap);
    if (data.empty()) throw Error(ErrorKind::validation, "input has no rows with a converted value");
    return validate_conversions(data);
}

bool has_both_classes(const std::vector<ClickRecord>& records) {
    bool yes = false, no = false;
    for (const auto& r : records) {
        if (!r.converted) continue;
        (*r.converted ? yes : no) = true;
    }
    return yes && no;
}

std::string removed_path(const std::string& kept, LogFormat fmt) {
    const fs::path p(kept);
    return (p.parent_path() / (p.stem().string() + ".removed" + (fmt == LogFormat::jsonl ? ".jsonl" : ".csv"))).string();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dwell-time click modelling, accidental-click thresholds and billing discounts"};
    app.set_version_flag("--version", kVersion);
    app.set_config("--config", "", "read options from an INI/TOML file");
    app.require_subcommand(1);

    CommonOpts common;
    FitOpts fit;
    ThresholdOpts thr;
    DiscountOpts disc;
    std::string scenario, removed_out;
    std::optional<std::uint64_t> synth_seed;
    double cap = 600.0;

    auto add_common = [&](CLI::App* sub, bool needs_input) {
        auto* in = sub->add_option("--input", common.input, "input file");
        if (needs_input) in->required()->check(CLI::ExistingFile);
        sub->add_option("--out", common.out, "output path")->required();
        sub->add_option("--format", common.format, "csv or jsonl (default: from the file extension)");
        sub->add_flag("--summary", common.summary, "print a short summary to stdout");
    };

    auto* synth = app.add_subcommand("synth", "generate a synthetic click log with ground truth");
    synth->add_option("--scenario", scenario, "scenario file")->required()->check(CLI::ExistingFile);
    synth->add_option("--seed", synth_seed, "override the scenario seed");
    add_common(synth, false);

    auto* fitc = app.add_subcommand("fit", "fit a dwell-time mixture per (ad, app)");
    add_common(fitc, true);
    add_fit_options(fitc, fit);

    auto* thrc = app.add_subcommand("thresholds", "derive accidental-click thresholds from fitted models");
    add_common(thrc, true);
    add_threshold_options(thrc, thr);
    thrc->add_option("--ecdf", thr.ecdf, "also write the eCDF of per-ad thresholds to this path");

    auto* discc = app.add_subcommand("discount", "compute per-app discount factors and revenue impact");
    add_common(discc, true);
    discc->add_option("--thresholds", disc.thresholds, "thresholds report")->required()->check(CLI::ExistingFile);
    add_discount_options(discc, disc);

    auto* filt = app.add_subcommand("filter", "split a click log into kept and accidental clicks");
    add_common(filt, true);
    filt->add_option("--thresholds", disc.thresholds, "thresholds report")->required()->check(CLI::ExistingFile);
    filt->add_option("--removed", removed_out, "path for removed clicks (default: <out stem>.removed.<ext>)");

    auto* val = app.add_subcommand("validate", "test dwell time as a conversion proxy");
    add_common(val, true);
    val->add_option("--outlier-cap", cap, "drop dwell above this many seconds")->capture_default_str();

    auto* pipe = app.add_subcommand("pipeline", "fit, thresholds, discount, filter and validate in one run");
    pipe->add_option("--input", common.input, "click log")->check(CLI::ExistingFile);
    pipe->add_option("--scenario", scenario, "generate the input from a scenario instead")->check(CLI::ExistingFile);
    pipe->add_option("--out", common.out, "output directory")->required();
    pipe->add_option("--format", common.format, "csv or jsonl");
    pipe->add_flag("--summary", common.summary, "print a short summary to stdout");
    add_fit_options(pipe, fit);
    add_threshold_options(pipe, thr);
    pipe->add_option("--method", disc.method, "mle, normal or agresti-coull")
        ->capture_default_str()
        ->check(CLI::IsMember({"mle", "normal", "agresti-coull"}));
    pipe->add_option("--z", disc.z, "normal quantile for confidence bounds")->capture_default_str();
    pipe->add_option("--discount-min-clicks", disc.min_clicks, "clicks an app needs for a discount factor")
        ->capture_default_str();
    pipe->add_flag("--unguarded", disc.unguarded, "use ucb(app)/ucb(pivot) without the lower-bound guard");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    CLI::App* sub = app.get_subcommands().front();
    try {
        Manifest m(sub->get_name(), *sub);
        const std::string manifest_path = sibling(common.out, ".manifest.json");

        if (sub == synth) {
            auto spec = load_scenario(scenario);
            if (synth_seed) spec.seed = *synth_seed;
            m.input(scenario);
            m.seed(spec.seed);
            const auto g = generate(spec);
            const auto fmt = format_for(common.format, common.out);
            write_click_log(common.out, g.clicks, fmt);
            const std::string truth = sibling(common.out, ".truth.json");
            write_json(truth, to_json(g.truth));
            m.output(common.out);
            m.output(truth);
            if (common.summary) std::cout << g.clicks.size() << " clicks over " << g.truth.ads.size() << " ads\n";
        } else if (sub == fitc) {
            const auto records = load_clicks(common.input, format_for(common.format, common.input), m);
            m.seed(fit.seed);
            const auto fits = fit_groups(records, ingest_config(fit), fit_config(fit));
            write_json(common.out, to_json(fits));
            m.output(common.out);
            if (common.summary) print_fit_summary(fits);
            if (fits.models.empty()) {
                m.write(manifest_path);
                std::cerr << "error: every group failed to fit\n";
                return kFitFailure;
            }
        } else if (sub == thrc) {
            m.input(common.input);
            const auto models = models_from_json(read_json(common.input));
            const auto report = make_thresholds(models, thr);
            write_json(common.out, to_json(report));
            m.output(common.out);
            if (!thr.ecdf.empty()) {
                write_json(thr.ecdf, ecdf_json(models, threshold_policy(thr)));
                m.output(thr.ecdf);
            }
            if (common.summary) print_threshold_summary(report);
        } else if (sub == discc) {
            const auto records = load_clicks(common.input, format_for(common.format, common.input), m);
            m.input(disc.thresholds);
            const auto thresholds = threshold_report_from_json(read_json(disc.thresholds));
            const auto counts =
                count_clicks(records, thresholds.thresholds, thresholds.default_threshold, disc.min_clicks);
            const auto report = build_discount_report(counts, discount_options(disc), thresholds.default_threshold);
            const auto impact = revenue_impact(records, report, thresholds.thresholds, thresholds.default_threshold);
            write_json(common.out, to_json(report, impact));
            m.output(common.out);
            if (common.summary) print_discount_summary(report, impact);
        } else if (sub == filt) {
            const auto fmt = format_for(common.format, common.input);
            const auto records = load_clicks(common.input, fmt, m);
            m.input(disc.thresholds);
            const auto thresholds = threshold_report_from_json(read_json(disc.thresholds));
            const auto result = filter_accidental(records, thresholds.thresholds, thresholds.default_threshold);
            const std::string removed = removed_out.empty() ? removed_path(common.out, fmt) : removed_out;
            const std::string stats = sibling(common.out, ".stats.json");
            write_click_log(common.out, result.kept, fmt);
            write_click_log(removed, result.removed, fmt);
            write_json(stats, filter_stats(records, result));
            m.output(common.out);
            m.output(removed);
            m.output(stats);
            if (common.summary) {
                std::cout << "kept " << result.kept.size() << ", removed " << result.removed.size() << '\n';
            }
        } else if (sub == val) {
            const auto records = load_clicks(common.input, format_for(common.format, common.input), m);
            const auto report = run_validation(records, cap);
            write_json(common.out, to_json(report));
            m.output(common.out);
            if (common.summary) {
                std::cout << "t = " << report.ttest.t_stat << ", p = " << report.ttest.p_value_two_tailed
                          << ", winner " << to_string(report.ranked.front().model) << '\n';
            }
        } else if (sub == pipe) {
            if (common.input.empty() == scenario.empty()) throw UsageError("pipeline needs exactly one of --input, --scenario");
            fs::create_directories(common.out);
            const fs::path dir(common.out);
            std::vector<ClickRecord> records;
            if (!scenario.empty()) {
                m.input(scenario);
                const auto g = generate(load_scenario(scenario));
                records = g.clicks;
                const std::string clicks = (dir / "clicks.csv").string();
                write_click_log(clicks, records, LogFormat::csv);
                write_json((dir / "truth.json").string(), to_json(g.truth));
                m.output(clicks);
                m.output((dir / "truth.json").string());
            } else {
                records = load_clicks(common.input, format_for(common.format, common.input), m);
            }
            m.seed(fit.seed);
            const auto fits = fit_groups(records, ingest_config(fit), fit_config(fit));
            write_json((dir / "models.json").string(), to_json(fits));
            m.output((dir / "models.json").string());
            if (fits.models.empty()) {
                m.write(manifest_path);
                std::cerr << "error: every group failed to fit\n";
                return kFitFailure;
            }
            const auto thresholds = make_thresholds(fits.models, thr);
            write_json((dir / "thresholds.json").string(), to_json(thresholds));
            m.output((dir / "thresholds.json").string());

            const auto counts =
                count_clicks(records, thresholds.thresholds, thresholds.default_threshold, disc.min_clicks);
            const auto report = build_discount_report(counts, discount_options(disc), thresholds.default_threshold);
            const auto impact = revenue_impact(records, report, thresholds.thresholds, thresholds.default_threshold);
            write_json((dir / "discount.json").string(), to_json(report, impact));
            m.output((dir / "discount.json").string());

            const auto filtered = filter_accidental(records, thresholds.thresholds, thresholds.default_threshold);
            write_click_log((dir / "kept.csv").string(), filtered.kept, LogFormat::csv);
            write_click_log((dir / "removed.csv").string(), filtered.removed, LogFormat::csv);
            write_json((dir / "filter_stats.json").string(), filter_stats(records, filtered));
            for (const char* f : {"kept.csv", "removed.csv", "filter_stats.json"}) m.output((dir / f).string());

            if (has_both_classes(records)) {
                write_json((dir / "validation.json").string(), to_json(run_validation(records, fit.outlier_cap)));
                m.output((dir / "validation.json").string());
            } else {
                m.note("validation", "skipped: conversion labels absent or single-class");
            }
            if (common.summary) {
                print_fit_summary(fits);
                print_threshold_summary(thresholds);
                print_discount_summary(report, impact);
            }
        }
        m.write(manifest_path);
        return kOk;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return e.kind() == ErrorKind::fit_failure ? kFitFailure : kData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kData;
    }
}
