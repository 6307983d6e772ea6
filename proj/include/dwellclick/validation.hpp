#pragma once

// Checks that log-dwell time separates converting from non-converting
// clicks: a Welch t-test plus linear and logit regressions ranked by AIC.

#include <cstddef>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "dwellclick/types.hpp"

namespace dwell {

struct LabeledDwell {
    double log_dwell = 0.0;
    bool converted = false;
};

// Log-transformed labeled observations; records without a conversion flag
// or with dwell outside (0, cap] are skipped.
std::vector<LabeledDwell> labeled_dwell(const std::vector<ClickRecord>& records, double outlier_cap_seconds);

struct TTestResult {
    double t_stat = 0.0;
    double degrees_of_freedom = 0.0;
    double p_value_two_tailed = 1.0;
    double mean_a = 0.0;
    double mean_b = 0.0;
};

// Welch's unequal-variance test. Needs at least two values per side.
TTestResult two_sample_ttest(std::span<const double> a, std::span<const double> b);

enum class RegressionModel { linear, logit };

const char* to_string(RegressionModel m);

struct RegressionFit {
    RegressionModel model = RegressionModel::linear;
    double beta0 = 0.0;
    double beta1 = 0.0;
    double se_beta0 = 0.0;
    double se_beta1 = 0.0;
    double log_likelihood = 0.0;  // Bernoulli log-likelihood of the fitted probabilities
    double aic = 0.0;
    bool converged = true;
    std::size_t iterations = 0;
    std::string diagnostics;
    std::vector<double> log_likelihood_trace;  // logit only, one entry per iterate
};

// Probabilities from the linear model are clamped to this margin inside (0, 1)
// before the log-likelihood is taken.
inline constexpr double kLinearProbabilityClamp = 1e-6;

RegressionFit fit_linear(std::span<const LabeledDwell> data);

struct LogitOptions {
    double rel_tol = 1e-10;
    int max_iters = 100;
};

RegressionFit fit_logit(std::span<const LabeledDwell> data, const LogitOptions& options = {});

// Stable ascending sort by AIC.
std::vector<RegressionFit> compare_aic(std::vector<RegressionFit> fits);

inline double odds_ratio(const RegressionFit& fit) { return std::exp(fit.beta1); }

struct ValidationReport {
    TTestResult ttest;
    std::vector<RegressionFit> ranked;
    std::size_t converted = 0;
    std::size_t not_converted = 0;
};

// Throws Error{validation} when only one class is present.
ValidationReport validate_conversions(std::span<const LabeledDwell> data);

nlohmann::ordered_json to_json(const ValidationReport& report);

}  // namespace dwell
