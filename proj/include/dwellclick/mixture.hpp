#pragma once

// Gaussian mixtures over log-dwell time, fit by EM with seeded restarts.
// A Gaussian mixture on ln(dwell) is the same model as a Log-Normal mixture
// on dwell; see lognormal_mixture_pdf.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace dwell {

struct MixtureComponent {
    double weight = 1.0;
    double mu = 0.0;      // mean of log-dwell
    double sigma2 = 1.0;  // variance of log-dwell
};

struct MixtureModel {
    std::vector<MixtureComponent> components;  // ascending by mu
    double log_likelihood = 0.0;
    std::size_t n = 0;
    int k = 0;
    bool converged = false;
    std::size_t iterations = 0;
    double aic = 0.0;
    double bic = 0.0;
};

enum class Criterion { aic, bic };

const char* to_string(Criterion c);
std::optional<Criterion> parse_criterion(std::string_view text);

struct FitConfig {
    int restarts = 10;
    int max_iters = 500;
    double rel_tol = 1e-8;
    double variance_floor = 1e-4;
    std::uint64_t seed = 0;
    Criterion criterion = Criterion::aic;
    int threads = 1;  // restarts run concurrently; results do not depend on it

    void validate() const;
};

double gaussian_pdf(double x, double mu, double sigma2);

double mixture_pdf(const MixtureModel& model, double x);

// Density of dwell time x > 0 under the equivalent Log-Normal mixture.
double lognormal_mixture_pdf(const MixtureModel& model, double dwell_seconds);

// Throws Error{contract} on an empty sample.
double log_likelihood(const MixtureModel& model, std::span<const double> log_dwell);

// Free parameters of a k-component mixture: (k-1) weights, k means, k variances.
inline int free_parameters(int k) { return 3 * k - 1; }
double aic(double log_likelihood, int k);
double bic(double log_likelihood, int k, std::size_t n);

// Smallest sample em_fit accepts for k components (n must exceed 2k).
inline std::size_t min_sample_size(int k) { return 2 * static_cast<std::size_t>(k) + 1; }

struct FitTrace {
    std::size_t winning_restart = 0;
    std::vector<double> log_likelihoods;  // winning run, one entry per parameter state
    std::size_t degenerate_restarts = 0;
};

MixtureModel em_fit(std::span<const double> log_dwell, int k, const FitConfig& cfg, FitTrace* trace = nullptr);

struct KDiagnostic {
    int k = 0;
    bool fitted = false;
    double criterion_value = 0.0;
    std::string note;
    std::optional<MixtureModel> model;
};

struct ModelSelection {
    MixtureModel model;
    std::vector<KDiagnostic> per_k;
};

ModelSelection select_model(std::span<const double> log_dwell, const FitConfig& cfg);

// Sorts components ascending by mu, ties by weight descending.
void sort_components(std::vector<MixtureComponent>& components);

nlohmann::ordered_json to_json(const MixtureModel& model);
MixtureModel mixture_from_json(const nlohmann::json& j);

namespace detail {

struct EmStep {
    double log_likelihood = 0.0;  // of the input parameters
    std::vector<MixtureComponent> next;
    std::vector<double> effective_counts;  // sum of responsibilities per component
};

// One E-step on `current` followed by the M-step it implies.
EmStep em_step(std::span<const MixtureComponent> current, std::span<const double> x, double variance_floor);

// Posterior membership probabilities, row-major n x k.
std::vector<double> responsibilities(std::span<const MixtureComponent> components, std::span<const double> x);

std::vector<MixtureComponent> initial_components(std::span<const double> sorted_x, int k, std::size_t restart,
                                                 const FitConfig& cfg);

}  // namespace detail

}  // namespace dwell
