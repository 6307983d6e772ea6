#include "dwellclick/mixture.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <thread>

#include "dwellclick/error.hpp"
#include "dwellclick/rng.hpp"

namespace dwell {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454836;

// Sums m_i + ln(s_i) with s_i in [1, k]. The s_i are multiplied in blocks
// so only one log is taken per block.
class LogAccumulator {
  public:
    void add(double m, double s) {
        linear_ += m;
        product_ *= s;
        if (++pending_ == kBlock) flush();
    }
    double value() {
        flush();
        return linear_ + logs_;
    }

  private:
    static constexpr int kBlock = 32;  // 3^32 stays far below the double range
    void flush() {
        if (pending_ == 0) return;
        logs_ += std::log(product_);
        product_ = 1.0;
        pending_ = 0;
    }
    double linear_ = 0.0;
    double logs_ = 0.0;
    double product_ = 1.0;
    int pending_ = 0;
};

struct ComponentTerms {
    double log_norm;  // ln w - 0.5 ln(2 pi sigma2)
    double inv_two_var;
    double mu;
};

std::vector<ComponentTerms> precompute(std::span<const MixtureComponent> comps) {
    std::vector<ComponentTerms> t;
    t.reserve(comps.size());
    for (const auto& c : comps) {
        t.push_back({std::log(c.weight) - 0.5 * (kLogTwoPi + std::log(c.sigma2)), 0.5 / c.sigma2, c.mu});
    }
    return t;
}

double biased_variance(std::span<const double> x, double mean) {
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    return ss / static_cast<double>(x.size());
}

double mean_of(std::span<const double> x) {
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

MixtureModel finish(std::vector<MixtureComponent> comps, double ll, std::size_t n, bool converged,
                    std::size_t iterations) {
    sort_components(comps);
    MixtureModel m;
    m.k = static_cast<int>(comps.size());
    m.components = std::move(comps);
    m.log_likelihood = ll;
    m.n = n;
    m.converged = converged;
    m.iterations = iterations;
    m.aic = aic(ll, m.k);
    m.bic = bic(ll, m.k, n);
    return m;
}

struct RunResult {
    bool degenerate = true;
    std::vector<MixtureComponent> comps;
    double ll = -std::numeric_limits<double>::infinity();
    bool converged = false;
    std::size_t iterations = 0;
    std::vector<double> trace;
};

RunResult run_em(std::span<const double> x, std::vector<MixtureComponent> comps, const FitConfig& cfg) {
    RunResult run;
    auto step = detail::em_step(comps, x, cfg.variance_floor);
    double ll = step.log_likelihood;
    run.trace.push_back(ll);
    for (int it = 1; it <= cfg.max_iters; ++it) {
        for (double count : step.effective_counts) {
            if (count < 2.0) return run;  // a component collapsed onto fewer than two points
        }
        comps = std::move(step.next);
        step = detail::em_step(comps, x, cfg.variance_floor);
        const double ll_new = step.log_likelihood;
        run.trace.push_back(ll_new);
        run.iterations = static_cast<std::size_t>(it);
        const double rel = std::fabs(ll_new - ll) / (std::fabs(ll_new) + 1.0);
        ll = ll_new;
        if (rel < cfg.rel_tol) {
            run.converged = true;
            break;
        }
    }
    if (!std::isfinite(ll)) return run;
    run.degenerate = false;
    run.comps = std::move(comps);
    run.ll = ll;
    return run;
}

}  // namespace

const char* to_string(Criterion c) { return c == Criterion::aic ? "aic" : "bic"; }

std::optional<Criterion> parse_criterion(std::string_view text) {
    if (text == "aic") return Criterion::aic;
    if (text == "bic") return Criterion::bic;
    return std::nullopt;
}

void FitConfig::validate() const {
    if (restarts <= 0 || max_iters <= 0 || threads <= 0 || !(rel_tol > 0.0) || !(variance_floor > 0.0)) {
        throw Error(ErrorKind::contract, "fit configuration values must be positive");
    }
}

double gaussian_pdf(double x, double mu, double sigma2) {
    const double d = x - mu;
    return std::exp(-0.5 * d * d / sigma2) / std::sqrt(2.0 * std::numbers::pi * sigma2);
}

double mixture_pdf(const MixtureModel& model, double x) {
    double p = 0.0;
    for (const auto& c : model.components) p += c.weight * gaussian_pdf(x, c.mu, c.sigma2);
    return p;
}

double lognormal_mixture_pdf(const MixtureModel& model, double dwell_seconds) {
    double p = 0.0;
    const double lx = std::log(dwell_seconds);
    for (const auto& c : model.components) {
        const double d = lx - c.mu;
        p += c.weight * std::exp(-0.5 * d * d / c.sigma2) /
             (dwell_seconds * std::sqrt(2.0 * std::numbers::pi * c.sigma2));
    }
    return p;
}

double log_likelihood(const MixtureModel& model, std::span<const double> log_dwell) {
    if (log_dwell.empty()) throw Error(ErrorKind::contract, "log-likelihood of an empty sample");
    const auto terms = precompute(model.components);
    LogAccumulator ll;
    std::vector<double> lj(terms.size());
    for (double x : log_dwell) {
        std::size_t arg = 0;
        for (std::size_t j = 0; j < terms.size(); ++j) {
            const double d = x - terms[j].mu;
            lj[j] = terms[j].log_norm - d * d * terms[j].inv_two_var;
            if (lj[j] > lj[arg]) arg = j;
        }
        double s = 0.0;
        for (std::size_t j = 0; j < lj.size(); ++j) s += j == arg ? 1.0 : std::exp(lj[j] - lj[arg]);
        ll.add(lj[arg], s);
    }
    return ll.value();
}

double aic(double ll, int k) { return -2.0 * ll + 2.0 * free_parameters(k); }

double bic(double ll, int k, std::size_t n) {
    return -2.0 * ll + free_parameters(k) * std::log(static_cast<double>(n));
}

void sort_components(std::vector<MixtureComponent>& components) {
    std::stable_sort(components.begin(), components.end(), [](const auto& a, const auto& b) {
        if (a.mu != b.mu) return a.mu < b.mu;
        return a.weight > b.weight;
    });
}

namespace detail {

template <std::size_t K>
void accumulate_em(std::span<const ComponentTerms> terms, std::span<const double> x, LogAccumulator& ll,
                   std::vector<double>& s0, std::vector<double>& s1, std::vector<double>& s2) {
    std::array<ComponentTerms, K> t;
    std::copy(terms.begin(), terms.end(), t.begin());
    std::array<double, K> a0{}, a1{}, a2{}, e{};
    for (double xi : x) {
        std::array<double, K> d, l;
        double m = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < K; ++j) {
            d[j] = xi - t[j].mu;  // centred on the old mean for accuracy
            l[j] = t[j].log_norm - d[j] * d[j] * t[j].inv_two_var;
            m = std::max(m, l[j]);
        }
        double s = 0.0;
        for (std::size_t j = 0; j < K; ++j) {
            e[j] = std::exp(l[j] - m);
            s += e[j];
        }
        ll.add(m, s);
        const double inv_s = 1.0 / s;
        for (std::size_t j = 0; j < K; ++j) {
            const double r = e[j] * inv_s;
            a0[j] += r;
            a1[j] += r * d[j];
            a2[j] += r * d[j] * d[j];
        }
    }
    for (std::size_t j = 0; j < K; ++j) {
        s0[j] = a0[j];
        s1[j] = a1[j];
        s2[j] = a2[j];
    }
}

EmStep em_step(std::span<const MixtureComponent> current, std::span<const double> x, double variance_floor) {
    const std::size_t k = current.size();
    const auto terms = precompute(current);
    std::vector<double> s0(k, 0.0), s1(k, 0.0), s2(k, 0.0);
    LogAccumulator ll;
    switch (k) {
        case 1: accumulate_em<1>(terms, x, ll, s0, s1, s2); break;
        case 2: accumulate_em<2>(terms, x, ll, s0, s1, s2); break;
        case 3: accumulate_em<3>(terms, x, ll, s0, s1, s2); break;
        default: throw Error(ErrorKind::contract, "em_step supports 1 to 3 components");
    }

    EmStep out;
    out.log_likelihood = ll.value();
    out.effective_counts = s0;
    out.next.resize(k);
    const double total = std::accumulate(s0.begin(), s0.end(), 0.0);
    for (std::size_t j = 0; j < k; ++j) {
        auto& c = out.next[j];
        c.weight = s0[j] / total;
        if (s0[j] > 0.0) {
            const double shift = s1[j] / s0[j];
            c.mu = current[j].mu + shift;
            c.sigma2 = std::max(s2[j] / s0[j] - shift * shift, variance_floor);
        } else {
            c.mu = current[j].mu;
            c.sigma2 = current[j].sigma2;
        }
    }
    return out;
}

std::vector<double> responsibilities(std::span<const MixtureComponent> components, std::span<const double> x) {
    const std::size_t k = components.size();
    const auto terms = precompute(components);
    std::vector<double> out(x.size() * k);
    for (std::size_t i = 0; i < x.size(); ++i) {
        double* row = &out[i * k];
        double m = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < k; ++j) {
            const double d = x[i] - terms[j].mu;
            row[j] = terms[j].log_norm - d * d * terms[j].inv_two_var;
            m = std::max(m, row[j]);
        }
        double s = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            row[j] = std::exp(row[j] - m);
            s += row[j];
        }
        for (std::size_t j = 0; j < k; ++j) row[j] /= s;
    }
    return out;
}

// Restart 0 starts at the stratum midpoints (2j+1)/(2k) of the sorted
// sample; later restarts jitter each position uniformly inside its stratum.
std::vector<MixtureComponent> initial_components(std::span<const double> sorted_x, int k, std::size_t restart,
                                                 const FitConfig& cfg) {
    const std::size_t n = sorted_x.size();
    const double mean = mean_of(sorted_x);
    const double var = std::max(biased_variance(sorted_x, mean) / k, cfg.variance_floor);
    const rng::Stream stream = rng::Stream(cfg.seed).split(static_cast<std::uint64_t>(k)).split(restart);

    std::vector<MixtureComponent> comps(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
        double q = (2.0 * j + 1.0) / (2.0 * k);
        if (restart > 0) q += (stream.uniform(static_cast<std::uint64_t>(j), 0) - 0.5) / k;
        auto idx = static_cast<std::size_t>(std::floor(q * static_cast<double>(n)));
        idx = std::min(idx, n - 1);
        comps[j] = {1.0 / k, sorted_x[idx], var};
    }
    return comps;
}

}  // namespace detail

MixtureModel em_fit(std::span<const double> log_dwell, int k, const FitConfig& cfg, FitTrace* trace) {
    cfg.validate();
    if (k < 1 || k > 3) throw Error(ErrorKind::contract, "component count must be 1, 2 or 3");
    const std::size_t n = log_dwell.size();
    if (n < min_sample_size(k)) {
        throw Error(ErrorKind::contract, "sample of " + std::to_string(n) + " is too small for k=" +
                                             std::to_string(k) + " (need at least " +
                                             std::to_string(min_sample_size(k)) + ")");
    }

    if (k == 1) {
        const double mu = mean_of(log_dwell);
        const double s2 = std::max(biased_variance(log_dwell, mu), cfg.variance_floor);
        MixtureModel m;
        m.components = {{1.0, mu, s2}};
        const double ll = log_likelihood(m, log_dwell);
        if (trace) {
            trace->winning_restart = 0;
            trace->log_likelihoods = {ll};
            trace->degenerate_restarts = 0;
        }
        return finish(std::move(m.components), ll, n, true, 1);
    }

    std::vector<double> sorted(log_dwell.begin(), log_dwell.end());
    std::sort(sorted.begin(), sorted.end());

    const auto restarts = static_cast<std::size_t>(cfg.restarts);
    std::vector<RunResult> runs(restarts);
    auto work = [&](std::size_t r) { runs[r] = run_em(log_dwell, detail::initial_components(sorted, k, r, cfg), cfg); };

    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.threads), restarts);
    if (workers <= 1) {
        for (std::size_t r = 0; r < restarts; ++r) work(r);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t r = w; r < restarts; r += workers) work(r);
            });
        }
        for (auto& t : pool) t.join();
    }

    std::optional<std::size_t> best;
    std::size_t degenerate = 0;
    for (std::size_t r = 0; r < restarts; ++r) {
        if (runs[r].degenerate) {
            ++degenerate;
            continue;
        }
        if (!best || runs[r].ll > runs[*best].ll) best = r;
    }
    if (!best) {
        throw Error(ErrorKind::fit_failure, "all " + std::to_string(restarts) + " EM restarts degenerated for k=" +
                                                std::to_string(k) + " on n=" + std::to_string(n));
    }
    auto& win = runs[*best];
    if (trace) {
        trace->winning_restart = *best;
        trace->log_likelihoods = win.trace;
        trace->degenerate_restarts = degenerate;
    }
    return finish(std::move(win.comps), win.ll, n, win.converged, win.iterations);
}

ModelSelection select_model(std::span<const double> log_dwell, const FitConfig& cfg) {
    cfg.validate();
    if (log_dwell.size() < 6) throw Error(ErrorKind::contract, "model selection needs at least 6 observations");
    ModelSelection out;
    std::optional<std::size_t> best;
    for (int k = 1; k <= 3; ++k) {
        KDiagnostic diag;
        diag.k = k;
        if (log_dwell.size() < min_sample_size(k)) {
            diag.note = "skipped: n=" + std::to_string(log_dwell.size()) + " below " +
                        std::to_string(min_sample_size(k)) + " required for k=" + std::to_string(k);
            out.per_k.push_back(std::move(diag));
            continue;
        }
        try {
            auto m = em_fit(log_dwell, k, cfg);
            diag.fitted = true;
            diag.criterion_value = cfg.criterion == Criterion::aic ? m.aic : m.bic;
            diag.model = std::move(m);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::fit_failure) throw;
            diag.note = e.what();
        }
        out.per_k.push_back(std::move(diag));
        const auto& d = out.per_k.back();
        if (d.fitted && (!best || d.criterion_value < out.per_k[*best].criterion_value)) {
            best = out.per_k.size() - 1;
        }
    }
    if (!best) throw Error(ErrorKind::fit_failure, "no component count could be fitted");
    out.model = *out.per_k[*best].model;
    return out;
}

nlohmann::ordered_json to_json(const MixtureModel& model) {
    nlohmann::ordered_json j;
    j["k"] = model.k;
    j["n"] = model.n;
    j["converged"] = model.converged;
    j["iterations"] = model.iterations;
    j["log_likelihood"] = model.log_likelihood;
    j["aic"] = model.aic;
    j["bic"] = model.bic;
    auto comps = nlohmann::ordered_json::array();
    for (const auto& c : model.components) {
        comps.push_back({{"weight", c.weight}, {"mu", c.mu}, {"sigma2", c.sigma2}});
    }
    j["components"] = std::move(comps);
    return j;
}

MixtureModel mixture_from_json(const nlohmann::json& j) {
    try {
        MixtureModel m;
        m.k = j.at("k").get<int>();
        m.n = j.value("n", std::size_t{0});
        m.converged = j.at("converged").get<bool>();
        m.iterations = j.at("iterations").get<std::size_t>();
        m.log_likelihood = j.at("log_likelihood").get<double>();
        m.aic = j.at("aic").get<double>();
        m.bic = j.at("bic").get<double>();
        for (const auto& c : j.at("components")) {
            m.components.push_back({c.at("weight").get<double>(), c.at("mu").get<double>(), c.at("sigma2").get<double>()});
        }
        if (m.k != static_cast<int>(m.components.size())) {
            throw Error(ErrorKind::schema, "model k does not match its component list");
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::schema, std::string("bad mixture model json: ") + e.what());
    }
}

}  // namespace dwell
