#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dwellclick/billing.hpp"
#include "dwellclick/click_log.hpp"
#include "dwellclick/error.hpp"
#include "dwellclick/pipeline.hpp"
#include "dwellclick/synth.hpp"
#include "test_support.hpp"

using namespace dwell;

TEST_CASE("degenerate mixture gives constant dwell") {
    const auto g = testsupport::single_ad(1000, {1.0, 0.0, 0.0}, {0.0, 1.0, 2.0}, {1e-12, 1.0, 1.0}, 4);
    REQUIRE(g.clicks.size() == 1000);
    for (const auto& c : g.clicks) CHECK(c.dwell_seconds == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(oracle_accidental_rate(g.truth, "app") == 1.0);
}

TEST_CASE("component frequencies follow the weights") {
    const auto g = testsupport::single_ad(100000, testsupport::kWeights3, testsupport::kMus3, testsupport::kSigma2s3, 9);
    const auto labels = click_labels(g.truth);
    REQUIRE(labels.size() == 100000);
    for (std::uint8_t j = 1; j <= 3; ++j) {
        const double freq = static_cast<double>(std::count(labels.begin(), labels.end(), j)) / 1e5;
        CHECK(std::fabs(freq - testsupport::kWeights3[j - 1]) <= 0.01);
    }
    CHECK(std::fabs(oracle_accidental_rate(g.truth, "app") - 0.1) <= 0.01);
}

TEST_CASE("per-component log-dwell means converge") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto g = testsupport::single_ad(30000, testsupport::kWeights3, testsupport::kMus3, testsupport::kSigma2s3, seed);
        const auto labels = click_labels(g.truth);
        for (std::size_t j = 0; j < 3; ++j) {
            double sum = 0.0;
            std::size_t n = 0;
            for (std::size_t i = 0; i < labels.size(); ++i) {
                if (labels[i] != j + 1) continue;
                sum += std::log(g.clicks[i].dwell_seconds);
                ++n;
            }
            const double band = 3.0 * std::sqrt(testsupport::kSigma2s3[j] / static_cast<double>(n));
            CHECK(std::fabs(sum / static_cast<double>(n) - testsupport::kMus3[j]) <= band);
        }
    }
}

TEST_CASE("dwell is strictly positive") {
    const auto g = testsupport::single_ad(20000, {0.5, 0.5, 0.0}, {-30.0, 30.0, 31.0}, {25.0, 25.0, 1.0}, 2);
    for (const auto& c : g.clicks) CHECK(c.dwell_seconds > 0.0);
}

TEST_CASE("generation is deterministic") {
    ScenarioSpec spec;
    spec.seed = 77;
    spec.conversion = ConversionSpec{-3.0, 0.5};
    for (const char* app : {"b", "a"}) {
        SegmentSpec s;
        s.app_id = app;
        s.ads = 4;
        s.clicks_low = 50;
        s.clicks_high = 80;
        s.weights = testsupport::kWeights3;
        s.mus = testsupport::kMus3;
        s.sigma2s = testsupport::kSigma2s3;
        s.cpc_low = 0.1;
        s.cpc_high = 2.0;
        s.mu1_jitter = 0.05;
        spec.apps.push_back(s);
    }
    auto render = [&] {
        const auto g = generate(spec);
        std::ostringstream os;
        write_click_log(os, g.clicks, LogFormat::csv);
        os << to_json(g.truth).dump();
        return os.str();
    };
    const auto first = render();
    CHECK(first == render());
    const auto g = generate(spec);
    CHECK(g.clicks.front().app_id == "a");
    CHECK(std::is_sorted(g.clicks.begin(), g.clicks.end(), [](const auto& x, const auto& y) {
        return std::tie(x.app_id, x.ad_id) < std::tie(y.app_id, y.ad_id);
    }));
    CHECK(g.truth.rng == "philox4x32-10+splitmix64");
    for (const auto& c : g.clicks) {
        REQUIRE(c.cpc);
        CHECK(std::round(*c.cpc * 100.0) / 100.0 == *c.cpc);
        CHECK(c.converted.has_value());
    }
    const auto back = ground_truth_from_json(nlohmann::json::parse(to_json(g.truth).dump()));
    CHECK(click_labels(back) == click_labels(g.truth));
    spec.seed = 78;
    CHECK(first != render());
}

TEST_CASE("oracle accidental rate") {
    const auto none = testsupport::single_ad(500, {0.0, 0.5, 0.5}, {0.0, 1.0, 2.0}, {1, 1, 1}, 1);
    CHECK(oracle_accidental_rate(none.truth, "app") == 0.0);
    const auto one = testsupport::single_ad(1, {1.0, 0.0, 0.0}, {0.0, 1.0, 2.0}, {1, 1, 1}, 1);
    CHECK(oracle_accidental_rate(one.truth, "app") == 1.0);
    try {
        oracle_accidental_rate(one.truth, "missing");
        FAIL("expected lookup error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::lookup);
    }
}

TEST_CASE("invalid specs list every violation") {
    ScenarioSpec spec;
    SegmentSpec s;
    s.app_id = "x";
    s.weights = {0.5, 0.2, 0.2};
    s.mus = {1.0, 0.5, 2.0};
    s.sigma2s = {1.0, 0.0, 1.0};
    spec.apps.push_back(s);
    const auto v = spec.violations();
    CHECK(v.size() == 3);
    try {
        generate(spec);
        FAIL("expected validation error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::validation);
        const std::string msg = e.what();
        CHECK(msg.find("sum to 1") != std::string::npos);
        CHECK(msg.find("increase") != std::string::npos);
        CHECK(msg.find("sigma2") != std::string::npos);
    }
    CHECK_FALSE(ScenarioSpec{}.violations().empty());
}

TEST_CASE("scenario parsing") {
    std::istringstream in(R"(# demo
seed = 12
conversion.beta0 = -6.424
conversion.beta1 = 0.301

[app alpha]
platform = ios
ads = 3
clicks_per_ad = 100 200
weights = 0.2 0.3 0.5
mus = 0.6 2.3 4.0
sigma2s = 0.04 0.25 0.36
cpc = 0.5 1.5
mu1_jitter = 0.05
)");
    const auto spec = parse_scenario(in);
    CHECK(spec.seed == 12);
    REQUIRE(spec.conversion);
    CHECK(spec.conversion->beta1 == 0.301);
    REQUIRE(spec.apps.size() == 1);
    const auto& a = spec.apps[0];
    CHECK(a.app_id == "alpha");
    CHECK(a.platform == Platform::ios);
    CHECK(a.ads == 3);
    CHECK(a.clicks_low == 100);
    CHECK(a.clicks_high == 200);
    CHECK(a.weights[2] == 0.5);
    CHECK(a.cpc_high == 1.5);
    CHECK(a.mu1_jitter == 0.05);
    CHECK(spec.violations().empty());

    std::istringstream bad("[app a]\nflavour = 3\n");
    CHECK_THROWS_AS(parse_scenario(bad), Error);
    std::istringstream half("conversion.beta0 = 1\n[app a]\n");
    CHECK_THROWS_AS(parse_scenario(half), Error);
}

TEST_CASE("end-to-end NACR matches the label oracle") {
    // Separation between components 1 and 2 is (2.3 - 0.75) / 0.5 = 3.1 sigma.
    ScenarioSpec spec;
    spec.seed = 31;
    SegmentSpec s;
    s.app_id = "app";
    s.ads = 200;
    s.clicks_low = s.clicks_high = 500;
    s.weights = testsupport::kWeights3;
    s.mus = testsupport::kMus3;
    s.sigma2s = testsupport::kSigma2s3;
    spec.apps.push_back(s);
    const auto g = generate(spec);
    REQUIRE(g.clicks.size() == 100000);

    FitConfig fit;
    fit.restarts = 3;
    const auto fits = fit_groups(g.clicks, IngestConfig{}, fit);
    const auto report = build_threshold_report(fits.models, ThresholdPolicy{}, ThresholdMode::per_app, std::nullopt);
    const auto counts = count_clicks(g.clicks, report.thresholds, report.default_threshold, 40);
    const double nacr = nacr_mle(counts.apps.at("app")).point;
    const double truth = 1.0 - oracle_accidental_rate(g.truth, "app");
    MESSAGE("pipeline NACR " << nacr << ", oracle " << truth << ", threshold "
                             << threshold_for("app", report.thresholds, report.default_threshold).seconds);
    CHECK(std::fabs(nacr - truth) <= 0.02);
}
