#include "dwellclick/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/students_t.hpp>

#include "dwellclick/error.hpp"

namespace dwell {

namespace {

struct Moments {
    double mean = 0.0;
    double var = 0.0;  // unbiased
};

Moments moments(std::span<const double> x) {
    double sum = 0.0;
    for (double v : x) sum += v;
    const double mean = sum / static_cast<double>(x.size());
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    return {mean, ss / static_cast<double>(x.size() - 1)};
}

double bernoulli_ll(double p, bool y) { return y ? std::log(p) : std::log1p(-p); }

// log(1 + e^eta) without overflow.
double softplus(double eta) { return eta > 0.0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta)); }

double logistic(double eta) {
    if (eta >= 0.0) return 1.0 / (1.0 + std::exp(-eta));
    const double e = std::exp(eta);
    return e / (1.0 + e);
}

double logit_ll(std::span<const LabeledDwell> data, double b0, double b1) {
    double ll = 0.0;
    for (const auto& d : data) {
        const double eta = b0 + b1 * d.log_dwell;
        ll += (d.converted ? eta : 0.0) - softplus(eta);
    }
    return ll;
}

void require_size(std::span<const LabeledDwell> data) {
    if (data.size() < 3) throw Error(ErrorKind::contract, "regression needs at least 3 observations");
}

}  // namespace

std::vector<LabeledDwell> labeled_dwell(const std::vector<ClickRecord>& records, double outlier_cap_seconds) {
    std::vector<LabeledDwell> out;
    for (const auto& r : records) {
        if (!r.converted || !(r.dwell_seconds > 0.0) || r.dwell_seconds > outlier_cap_seconds) continue;
        out.push_back({std::log(r.dwell_seconds), *r.converted});
    }
    return out;
}

TTestResult two_sample_ttest(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) throw Error(ErrorKind::contract, "t-test needs at least two values per sample");
    const auto ma = moments(a);
    const auto mb = moments(b);
    const double va = ma.var / static_cast<double>(a.size());
    const double vb = mb.var / static_cast<double>(b.size());
    TTestResult r;
    r.mean_a = ma.mean;
    r.mean_b = mb.mean;
    const double se2 = va + vb;
    if (se2 == 0.0) {
        r.t_stat = ma.mean == mb.mean ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), ma.mean - mb.mean);
        r.degrees_of_freedom = static_cast<double>(a.size() + b.size() - 2);
        r.p_value_two_tailed = ma.mean == mb.mean ? 1.0 : 0.0;
        return r;
    }
    r.t_stat = (ma.mean - mb.mean) / std::sqrt(se2);
    r.degrees_of_freedom = se2 * se2 /
                           (va * va / static_cast<double>(a.size() - 1) + vb * vb / static_cast<double>(b.size() - 1));
    const boost::math::students_t dist(r.degrees_of_freedom);
    r.p_value_two_tailed = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(r.t_stat))));
    return r;
}

const char* to_string(RegressionModel m) { return m == RegressionModel::linear ? "linear" : "logit"; }

RegressionFit fit_linear(std::span<const LabeledDwell> data) {
    require_size(data);
    const double n = static_cast<double>(data.size());
    double mx = 0.0, my = 0.0;
    for (const auto& d : data) {
        mx += d.log_dwell;
        my += d.converted ? 1.0 : 0.0;
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& d : data) {
        const double dx = d.log_dwell - mx;
        sxx += dx * dx;
        sxy += dx * ((d.converted ? 1.0 : 0.0) - my);
    }
    if (!(sxx > 0.0)) throw Error(ErrorKind::contract, "degenerate design: log-dwell is constant");

    RegressionFit fit;
    fit.model = RegressionModel::linear;
    fit.beta1 = sxy / sxx;
    fit.beta0 = my - fit.beta1 * mx;

    double rss = 0.0;
    double ll = 0.0;
    for (const auto& d : data) {
        const double yhat = fit.beta0 + fit.beta1 * d.log_dwell;
        const double y = d.converted ? 1.0 : 0.0;
        rss += (y - yhat) * (y - yhat);
        const double p = std::clamp(yhat, kLinearProbabilityClamp, 1.0 - kLinearProbabilityClamp);
        ll += bernoulli_ll(p, d.converted);
    }
    const double s2 = data.size() > 2 ? rss / (n - 2.0) : 0.0;
    fit.se_beta1 = std::sqrt(s2 / sxx);
    fit.se_beta0 = std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
    fit.log_likelihood = ll;
    fit.aic = -2.0 * ll + 2.0 * 2;
    fit.iterations = 1;
    return fit;
}

// Newton-Raphson (IRLS) on the 2x2 system with step halving so the
// log-likelihood never decreases.
RegressionFit fit_logit(std::span<const LabeledDwell> data, const LogitOptions& options) {
    require_size(data);
    std::size_t positives = 0;
    double mx = 0.0;
    for (const auto& d : data) {
        positives += d.converted ? 1 : 0;
        mx += d.log_dwell;
    }
    if (positives == 0 || positives == data.size()) {
        throw Error(ErrorKind::contract, "logit fit needs both converted and non-converted observations");
    }
    const double n = static_cast<double>(data.size());
    mx /= n;

    RegressionFit fit;
    fit.model = RegressionModel::logit;
    fit.converged = false;
    const double p0 = static_cast<double>(positives) / n;
    double b0 = std::log(p0 / (1.0 - p0));
    double b1 = 0.0;
    double ll = logit_ll(data, b0, b1);
    fit.log_likelihood_trace.push_back(ll);

    double h00 = 0.0, h01 = 0.0, h11 = 0.0;
    for (int it = 1; it <= options.max_iters; ++it) {
        double g0 = 0.0, g1 = 0.0;
        h00 = h01 = h11 = 0.0;
        for (const auto& d : data) {
            const double p = logistic(b0 + b1 * d.log_dwell);
            const double r = (d.converted ? 1.0 : 0.0) - p;
            const double w = p * (1.0 - p);
            g0 += r;
            g1 += r * d.log_dwell;
            h00 += w;
            h01 += w * d.log_dwell;
            h11 += w * d.log_dwell * d.log_dwell;
        }
        const double det = h00 * h11 - h01 * h01;
        fit.iterations = static_cast<std::size_t>(it);
        if (!(det > 0.0) || !std::isfinite(det)) {
            fit.diagnostics = "singular information matrix; likely perfect separation";
            break;
        }
        const double d0 = (h11 * g0 - h01 * g1) / det;
        const double d1 = (h00 * g1 - h01 * g0) / det;

        double step = 1.0;
        double nb0 = b0 + d0, nb1 = b1 + d1;
        double nll = logit_ll(data, nb0, nb1);
        for (int half = 0; half < 30 && !(nll >= ll); ++half) {
            step *= 0.5;
            nb0 = b0 + step * d0;
            nb1 = b1 + step * d1;
            nll = logit_ll(data, nb0, nb1);
        }
        if (!(nll >= ll)) {
            fit.diagnostics = "step halving failed to improve the likelihood";
            break;
        }
        const double change = std::hypot(nb0 - b0, nb1 - b1) / (std::hypot(b0, b1) + 1e-12);
        b0 = nb0;
        b1 = nb1;
        ll = nll;
        fit.log_likelihood_trace.push_back(ll);
        if (change < options.rel_tol) {
            fit.converged = true;
            break;
        }
    }
    if (!fit.converged && fit.diagnostics.empty()) {
        fit.diagnostics = "iteration cap reached; coefficients may be diverging (perfect separation?)";
    }

    fit.beta0 = b0;
    fit.beta1 = b1;
    fit.log_likelihood = ll;
    fit.aic = -2.0 * ll + 2.0 * 2;
    // standard errors from the inverse observed information at the optimum
    h00 = h01 = h11 = 0.0;
    for (const auto& d : data) {
        const double p = logistic(b0 + b1 * d.log_dwell);
        const double w = p * (1.0 - p);
        h00 += w;
        h01 += w * d.log_dwell;
        h11 += w * d.log_dwell * d.log_dwell;
    }
    const double det = h00 * h11 - h01 * h01;
    if (det > 0.0) {
        fit.se_beta0 = std::sqrt(h11 / det);
        fit.se_beta1 = std::sqrt(h00 / det);
    } else {
        fit.se_beta0 = fit.se_beta1 = std::numeric_limits<double>::infinity();
    }
    return fit;
}

std::vector<RegressionFit> compare_aic(std::vector<RegressionFit> fits) {
    std::stable_sort(fits.begin(), fits.end(), [](const auto& a, const auto& b) { return a.aic < b.aic; });
    return fits;
}

ValidationReport validate_conversions(std::span<const LabeledDwell> data) {
    std::vector<double> yes, no;
    for (const auto& d : data) (d.converted ? yes : no).push_back(d.log_dwell);
    if (yes.empty() || no.empty()) {
        throw Error(ErrorKind::validation, "conversion column has a single class (" + std::to_string(yes.size()) +
                                               " converted, " + std::to_string(no.size()) + " not converted)");
    }
    ValidationReport report;
    report.converted = yes.size();
    report.not_converted = no.size();
    report.ttest = two_sample_ttest(yes, no);
    report.ranked = compare_aic({fit_linear(data), fit_logit(data)});
    return report;
}

nlohmann::ordered_json to_json(const ValidationReport& report) {
    nlohmann::ordered_json j;
    j["ttest"] = {{"t", report.ttest.t_stat},
                  {"df", report.ttest.degrees_of_freedom},
                  {"p", report.ttest.p_value_two_tailed},
                  {"means", {{"converted", report.ttest.mean_a}, {"not_converted", report.ttest.mean_b}}}};
    j["counts"] = {{"converted", report.converted}, {"not_converted", report.not_converted}};
    auto fits = nlohmann::ordered_json::array();
    for (const auto& f : report.ranked) {
        nlohmann::ordered_json jf = {{"model", to_string(f.model)},
                                     {"beta0", f.beta0},
                                     {"beta1", f.beta1},
                                     {"se_beta1", f.se_beta1},
                                     {"log_likelihood", f.log_likelihood},
                                     {"aic", f.aic},
                                     {"converged", f.converged},
                                     {"iterations", f.iterations}};
        if (f.model == RegressionModel::logit) jf["odds_ratio_per_unit_log_dwell"] = odds_ratio(f);
        if (!f.diagnostics.empty()) jf["diagnostics"] = f.diagnostics;
        fits.push_back(std::move(jf));
    }
    j["fits"] = std::move(fits);
    j["winner"] = report.ranked.empty() ? "" : to_string(report.ranked.front().model);
    return j;
}

}  // namespace dwell
