#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "billing_oracle.hpp"
#include "dwellclick/billing.hpp"
#include "dwellclick/error.hpp"
#include "oracle_values.hpp"

using namespace dwell;

namespace {

ClickRecord click(std::string app, double dwell, std::optional<double> cpc = std::nullopt, std::string ad = "ad") {
    ClickRecord r;
    r.ad_id = std::move(ad);
    r.app_id = std::move(app);
    r.dwell_seconds = dwell;
    r.cpc = cpc;
    return r;
}

ThresholdEstimate secs(double s) { return {s, ThresholdScope::per_app, 1, ThresholdStatistic::median}; }

ClickCounts counts(std::string app, std::size_t total, std::size_t nonacc) {
    return {std::move(app), total, nonacc, false};
}

NacrEstimate interval(std::string app, double lcb, double ucb, std::size_t n = 100) {
    return {std::move(app), (lcb + ucb) / 2, lcb, ucb, IntervalMethod::agresti_coull, n, kDefaultZ};
}

}  // namespace

TEST_CASE("count_clicks") {
    ThresholdMap t{{"app", secs(2.1)}};
    std::vector<ClickRecord> recs;
    for (double d : {0.5, 1.0, 2.1, 2.2, 3.0, 5.0, 8.0, 13.0, 21.0, 34.0}) recs.push_back(click("app", d));
    auto c = count_clicks(recs, t, secs(2.1), 1);
    CHECK(c.apps.at("app").total_clicks == 10);
    CHECK(c.apps.at("app").non_accidental_clicks == 7);
    CHECK_FALSE(c.apps.at("app").insufficient);

    const auto all_acc = count_clicks({click("app", 0.1), click("app", 1.0)}, t, secs(2.1), 1);
    CHECK(all_acc.apps.at("app").non_accidental_clicks == 0);
    CHECK(nacr_mle(all_acc.apps.at("app")).point == 0.0);

    // 100 clicks over two apps with dwell i/10 s; app A cut 2.5 s, app B falls back to 4.0 s.
    std::vector<ClickRecord> fixture;
    for (int i = 0; i < 100; ++i) fixture.push_back(click(i % 2 ? "B" : "A", i / 10.0, std::nullopt, "ad" + std::to_string(i % 7)));
    const auto f = count_clicks(fixture, {{"A", secs(2.5)}}, secs(4.0), 40);
    // A holds even i: dwell > 2.5 for i in 26..98 -> 37 clicks. B holds odd i: dwell > 4.0 for i in 41..99 -> 30.
    CHECK(f.apps.at("A").total_clicks == 50);
    CHECK(f.apps.at("A").non_accidental_clicks == 37);
    CHECK(f.apps.at("B").non_accidental_clicks == 30);
    CHECK_FALSE(f.apps.at("A").insufficient);
    CHECK(count_clicks(fixture, {}, secs(4.0), 51).apps.at("A").insufficient);
    CHECK(f.ad_pairs.at("A") == 7);
    CHECK(f.ad_pairs_below_floor.at("A") == 7);
}

TEST_CASE("MLE non-accidental rate") {
    const auto e = nacr_mle(counts("a", 100, 72));
    CHECK(e.point == 0.72);
    CHECK(e.lcb == e.point);
    CHECK(e.ucb == e.point);
    CHECK(nacr_mle(counts("a", 100, 0)).point == 0.0);
    CHECK(nacr_mle(counts("a", 100, 100)).point == 1.0);
    try {
        nacr_mle(counts("a", 0, 0));
        FAIL("expected insufficient data");
    } catch (const Error& err) {
        CHECK(err.kind() == ErrorKind::insufficient_data);
    }
}

TEST_CASE("normal-approximation interval") {
    const auto e = nacr_normal_interval(counts("a", 100, 50), kDefaultZ);
    CHECK(e.ucb - e.point == doctest::Approx(oracle::kNormalHalfWidthP05N100).epsilon(1e-12));
    CHECK(e.point - e.lcb == doctest::Approx(oracle::kNormalHalfWidthP05N100).epsilon(1e-12));
    const auto zero = nacr_normal_interval(counts("a", 57, 0), kDefaultZ);
    CHECK(zero.lcb == 0.0);
    CHECK(zero.ucb == 0.0);
    const auto one = nacr_normal_interval(counts("a", 10, 10), kDefaultZ);
    CHECK(one.lcb == 1.0);
    CHECK(one.ucb == 1.0);
    CHECK_THROWS_AS(nacr_normal_interval(counts("a", 0, 0), kDefaultZ), Error);
}

TEST_CASE("Agresti-Coull interval") {
    const auto e = nacr_agresti_coull(counts("a", 10, 0), kDefaultZ);
    CHECK(e.point == doctest::Approx(oracle::kAcX0N10Center).epsilon(1e-14));
    CHECK(e.lcb == 0.0);
    CHECK(e.ucb == doctest::Approx(oracle::kAcX0N10Ucb).epsilon(1e-14));
    CHECK(e.ucb - e.lcb == doctest::Approx(oracle::kAcX0N10Width).epsilon(1e-14));

    const auto all = nacr_agresti_coull(counts("a", 10000, 10000), kDefaultZ);
    CHECK(all.ucb == 1.0);
    CHECK(all.lcb > 0.999);
    CHECK(all.lcb < 1.0);

    const auto z0 = nacr_agresti_coull(counts("a", 40, 13), 0.0);
    CHECK(z0.point == 13.0 / 40.0);
    CHECK(z0.lcb == z0.ucb);

    for (const auto& c : oracle::kIntervalCases) {
        const auto ac = nacr_agresti_coull(counts("a", c.n, c.x), c.z);
        CHECK(std::fabs(ac.lcb - c.ac_lcb) <= 1e-12);
        CHECK(std::fabs(ac.ucb - c.ac_ucb) <= 1e-12);
    }
}

TEST_CASE("property: Agresti-Coull width is positive and shrinks like 1/sqrt(n)") {
    std::mt19937_64 gen(6);
    for (int i = 0; i < 2000; ++i) {
        const std::size_t n = 1 + gen() % 5000;
        const std::size_t x = gen() % (n + 1);
        const double z = std::uniform_real_distribution<double>(0.1, 4.0)(gen);
        const auto e = nacr_agresti_coull(counts("a", n, x), z);
        CHECK(e.ucb > e.lcb);
        CHECK(e.lcb <= e.point);
        CHECK(e.point <= e.ucb);
    }
    // The ratio tends to 1/sqrt(2) from above; n >= 10^4 keeps it inside the band.
    for (int i = 0; i < 500; ++i) {
        const std::size_t n = 10000 + gen() % 990000;
        const double p = std::uniform_real_distribution<double>(0.05, 0.95)(gen);
        const auto x = static_cast<std::size_t>(p * static_cast<double>(n));
        const auto a = nacr_agresti_coull(counts("a", n, x), kDefaultZ);
        const auto b = nacr_agresti_coull(counts("a", 2 * n, 2 * x), kDefaultZ);
        const double ratio = (b.ucb - b.lcb) / (a.ucb - a.lcb);
        CHECK(ratio >= 0.70);
        CHECK(ratio <= 0.7072);
    }
}

TEST_CASE("select_pivot") {
    auto mle = [](std::string app, double p, std::size_t n) {
        return NacrEstimate{std::move(app), p, p, p, IntervalMethod::mle, n, 0.0};
    };
    CHECK(select_pivot({mle("A", 0.9, 100), mle("B", 0.8, 100)}) == "A");
    CHECK(select_pivot({mle("A", 0.9, 100), mle("B", 0.9, 200)}) == "B");
    CHECK(select_pivot({mle("B", 0.9, 100), mle("A", 0.9, 100)}) == "A");
    CHECK_THROWS_AS(select_pivot({}), Error);
    CHECK_THROWS_AS(select_pivot({mle("A", 0.9, 1), interval("B", 0.1, 0.2)}), Error);
}

TEST_CASE("discount_factor") {
    CHECK(discount_factor(interval("app", 0.70, 0.79), interval("pivot", 0.9, 1.0), true) == doctest::Approx(0.79));
    const double over = discount_factor(interval("app", 0.97, 0.99), interval("pivot", 0.90, 0.95), true);
    CHECK(over == doctest::Approx(0.97 / 0.95));
    CHECK(over > 1.0);
    const double tiny = discount_factor(interval("app", 0.2, 0.98, 5), interval("pivot", 0.9, 0.99), true);
    CHECK(tiny == doctest::Approx(0.98 / 0.99));
    CHECK(std::fabs(tiny - 1.0) < 0.05);
    CHECK(discount_factor(interval("app", 0.7, 0.8), interval("pivot", 0.5, 0.6), false) == doctest::Approx(0.8 / 0.6));
    CHECK(discount_factor(interval("app", 0.7, 0.8), interval("pivot", 0.5, 0.6), true) == doctest::Approx(0.7 / 0.6));

    const auto app = nacr_mle(counts("app", 100, 66));
    const auto pivot = nacr_mle(counts("pivot", 100, 92));
    CHECK(discount_factor(app, pivot, true) == doctest::Approx(0.66 / 0.92));
    CHECK(discount_factor(pivot, app, true) == doctest::Approx(0.92 / 0.66));

    try {
        discount_factor(app, nacr_mle(counts("pivot", 10, 0)), true);
        FAIL("expected undefined pivot");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::undefined_pivot);
    }
}

TEST_CASE("adjusted cpc") {
    CHECK(adjusted_cpc(1.0, 0.75) == 0.75);
    CHECK(adjusted_cpc(1.37, 1.0) == 1.37);
    CHECK(adjusted_cpc(0.0, 0.6) == 0.0);
}

TEST_CASE("discount report") {
    CountResult c;
    c.apps["A"] = counts("A", 5000, 4700);
    c.apps["B"] = counts("B", 4000, 2900);
    c.apps["C"] = {"C", 10, 9, true};
    DiscountOptions opt;
    const auto r = build_discount_report(c, opt, secs(2.1));
    CHECK(r.pivot_app == "A");
    REQUIRE(r.entries.size() == 2);
    for (const auto& e : r.entries) CHECK(e.app_id != "A");
    CHECK(r.entries[0].app_id == "B");
    REQUIRE(r.entries[0].discount_factor);
    CHECK(*r.entries[0].discount_factor < 1.0);
    CHECK_FALSE(r.entries[1].discount_factor);
    CHECK(r.entries[1].flags == std::vector<std::string>{"insufficient_data"});
    CHECK(r.factor_for("C") == 1.0);
    CHECK(r.factor_for("A") == 1.0);
    CHECK_FALSE(r.pivot_update_recommended);

    DiscountOptions self = opt;
    self.pivot_self_discount = true;
    self.pivot_alert_clicks = 100;
    const auto rs = build_discount_report(c, self, secs(2.1));
    CHECK(rs.factor_for("A") == *r.entries[0].discount_factor);

    const auto j = to_json(r, std::nullopt);
    CHECK(j["pivot_app"] == "A");
    CHECK(j["entries"][1]["discount_factor"].is_null());

    CountResult none;
    none.apps["A"] = {"A", 3, 3, true};
    CHECK_THROWS_AS(build_discount_report(none, opt, secs(2.1)), Error);
}

TEST_CASE("pivot update is flagged when an app confidently beats the pivot") {
    const auto pivot = nacr_agresti_coull(counts("old", 2000, 1800), kDefaultZ);
    const auto app = nacr_agresti_coull(counts("new", 100000, 95000), kDefaultZ);
    CHECK(app.lcb > pivot.ucb);
    CHECK(discount_factor(app, pivot, true) > 1.0);
}

TEST_CASE("revenue impact") {
    ThresholdMap t{{"A", secs(2.0)}, {"B", secs(2.0)}};
    DiscountReport report;
    report.pivot_app = "A";
    report.entries.push_back({"B", {}, 0.6, {}});

    SUBCASE("no accidental clicks: all totals equal, mitigation not applicable") {
        const auto imp = revenue_impact({click("A", 5, 1.0), click("B", 9, 2.0)}, report, t, secs(2.0));
        CHECK(imp.chargeall == 3.0);
        CHECK(imp.discard == 3.0);
        CHECK(imp.smooth == 3.0);
        CHECK_FALSE(imp.mitigation_ratio);
    }
    SUBCASE("identity factors recover the whole loss") {
        DiscountReport ident = report;
        ident.entries[0].discount_factor = 1.0;
        const auto imp = revenue_impact({click("A", 1, 1.0), click("B", 1, 2.0), click("B", 3, 2.0)}, ident, t, secs(2.0));
        CHECK(imp.smooth == imp.chargeall);
        REQUIRE(imp.mitigation_ratio);
        CHECK(*imp.mitigation_ratio == 1.0);
    }
    SUBCASE("missing cpc is skipped and counted") {
        const auto imp = revenue_impact({click("A", 1), click("B", 1, 2.0)}, report, t, secs(2.0));
        CHECK(imp.skipped_missing_cpc == 1);
        CHECK(imp.smooth == doctest::Approx(1.2));
        CHECK(imp.discard == 0.0);
    }
    SUBCASE("per-click replay oracle and ordering") {
        std::mt19937_64 gen(10);
        std::vector<ClickRecord> recs;
        for (int i = 0; i < 5000; ++i) {
            recs.push_back(click(gen() % 2 ? "A" : "B", std::exp(std::normal_distribution<double>(1.0, 1.0)(gen)),
                                 std::round(std::uniform_real_distribution<double>(0.1, 3.0)(gen) * 100) / 100));
        }
        const auto imp = revenue_impact(recs, report, t, secs(2.0));
        const auto oracle = testsupport::replay_billing(recs, {{"A", 2.0}, {"B", 2.0}}, 2.0, {{"B", 0.6}});
        CHECK(imp.chargeall == oracle.chargeall);
        CHECK(imp.discard == oracle.discard);
        CHECK(imp.smooth == oracle.smooth);
        CHECK(imp.discard <= imp.smooth);
        CHECK(imp.smooth <= imp.chargeall);
        std::shuffle(recs.begin(), recs.end(), gen);
        const auto again = revenue_impact(recs, report, t, secs(2.0));
        CHECK(again.chargeall == imp.chargeall);
        CHECK(again.smooth == imp.smooth);
        CHECK(again.discard == imp.discard);
    }
}
