#pragma once

// Seeded synthetic click logs with known latent components.
//
// Scenario files are line-oriented `key = value` text. Top-level keys:
//   seed, start_timestamp, conversion.beta0, conversion.beta1
// Each `[app <app_id>]` section adds a segment of ads to that app (an app
// may have several segments, e.g. to mix 2- and 3-component ads):
//   platform       android | ios | other
//   ads            number of ads in the segment
//   clicks_per_ad  N (fixed) or LOW HIGH (uniform, inclusive)
//   weights        three mixture weights summing to 1 (zeros allowed)
//   mus            three log-dwell means, increasing where weight > 0
//   sigma2s        three log-dwell variances
//   cpc            LOW HIGH, per-ad cost drawn uniformly, rounded to cents
//   mu1_jitter     optional sd of a per-ad shift of the first mean
// Lines starting with '#' are comments.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dwellclick/types.hpp"

namespace dwell {

struct SegmentSpec {
    std::string app_id;
    Platform platform = Platform::other;
    std::size_t ads = 1;
    std::size_t clicks_low = 100;
    std::size_t clicks_high = 100;
    std::array<double, 3> weights{1.0, 0.0, 0.0};
    std::array<double, 3> mus{0.0, 1.0, 2.0};
    std::array<double, 3> sigma2s{1.0, 1.0, 1.0};
    double cpc_low = 1.0;
    double cpc_high = 1.0;
    double mu1_jitter = 0.0;
};

struct ConversionSpec {
    double beta0 = 0.0;
    double beta1 = 0.0;
};

struct ScenarioSpec {
    std::vector<SegmentSpec> apps;
    std::optional<ConversionSpec> conversion;
    std::uint64_t seed = 0;
    std::int64_t start_timestamp = 1700000000;

    // Lists every violation; empty when valid.
    std::vector<std::string> violations() const;
};

ScenarioSpec parse_scenario(std::istream& in);
ScenarioSpec load_scenario(const std::string& path);

struct AdTruth {
    std::string ad_id;
    std::string app_id;
    Platform platform = Platform::other;
    std::array<double, 3> weights{};
    std::array<double, 3> mus{};
    std::array<double, 3> sigma2s{};
    double cpc = 0.0;
    std::vector<std::uint8_t> labels;  // 1-based component of each click, in log order
};

struct GroundTruth {
    std::uint64_t seed = 0;
    std::string rng = "";
    std::vector<AdTruth> ads;  // sorted by (app_id, ad_id), same order as the clicks
    std::optional<ConversionSpec> conversion;
};

struct GeneratedLog {
    std::vector<ClickRecord> clicks;
    GroundTruth truth;
};

// Throws Error{validation} listing every violation of an invalid spec.
GeneratedLog generate(const ScenarioSpec& spec);

// Component labels flattened in click-log order.
std::vector<std::uint8_t> click_labels(const GroundTruth& truth);

// Fraction of an app's clicks drawn from component 1. Throws Error{lookup}
// for an unknown app.
double oracle_accidental_rate(const GroundTruth& truth, const std::string& app_id);

nlohmann::ordered_json to_json(const GroundTruth& truth);
GroundTruth ground_truth_from_json(const nlohmann::json& j);

}  // namespace dwell
