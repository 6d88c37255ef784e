#include "volclust/simulate.hpp"

#include "volclust/errors.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <cmath>
#include <numeric>
#include <random>

namespace volclust {

SimResult simulate_path(const SimConfig& cfg) {
    if (cfg.n < 1) throw DomainError("n must be >= 1");
    validate(cfg.family, cfg.params, cfg.truncation);

    const ArchFilter filter = make_filter(cfg.family, cfg.params, cfg.truncation);
    const double level = filter.steady_state().value_or(filter.omega / (1.0 - filter.beta));
    const std::size_t k = filter.taps.size();
    const std::size_t total = cfg.burn_in + cfg.n;

    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::student_t_distribution<double> student(cfg.params.nu.value_or(3.0));
    const double t_scale = cfg.params.nu ? std::sqrt((*cfg.params.nu - 2.0) / *cfg.params.nu) : 1.0;

    std::vector<double> e2(total);
    SimResult out;
    out.series.id = "simulated-" + std::string(to_string(cfg.family));
    out.series.source = "simulate";
    out.series.returns.reserve(cfg.n);
    out.series.dates.reserve(cfg.n);
    out.path.sigma2.reserve(cfg.n);
    out.shocks.reserve(cfg.n);

    const std::chrono::sys_days origin{std::chrono::year{2000} / std::chrono::January / 1};
    double prev = level;
    for (std::size_t t = 0; t < total; ++t) {
        double conv = 0.0;
        for (std::size_t j = 1; j <= k; ++j) conv += filter.taps[j - 1] * (j <= t ? e2[t - j] : level);
        const double s2 = filter.omega + filter.beta * prev + conv;
        if (!(s2 > 0.0) || !std::isfinite(s2))
            throw InfeasibleParameters(std::string(to_string(cfg.family)) +
                                       ": simulated conditional variance became nonpositive at step " +
                                       std::to_string(t));
        const double z = cfg.params.nu ? student(rng) * t_scale : normal(rng);
        const double e = z * std::sqrt(s2);
        e2[t] = e * e;
        prev = s2;
        if (t >= cfg.burn_in) {
            const auto i = static_cast<int>(t - cfg.burn_in);
            out.series.returns.push_back(e);
            out.series.dates.emplace_back(origin + std::chrono::days{i});
            out.path.sigma2.push_back(s2);
            out.shocks.push_back(z);
        }
    }
    out.path.loglik = log_likelihood(out.series.returns, out.path.sigma2, cfg.params.nu);
    return out;
}

std::vector<double> autocorrelation(std::span<const double> x, std::size_t max_lag) {
    if (max_lag < 1 || x.size() <= max_lag)
        throw DomainError("autocorrelation needs size > max_lag >= 1");
    if (std::adjacent_find(x.begin(), x.end(), std::not_equal_to<>()) == x.end())
        throw DegenerateError("autocorrelation of a constant series is undefined");
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    double denom = 0.0;
    for (double v : x) denom += (v - mean) * (v - mean);
    if (!(denom > 0.0)) throw DegenerateError("autocorrelation of a constant series is undefined");
    std::vector<double> acf(max_lag + 1);
    for (std::size_t k = 0; k <= max_lag; ++k) {
        double num = 0.0;
        for (std::size_t t = 0; t + k < x.size(); ++t) num += (x[t] - mean) * (x[t + k] - mean);
        acf[k] = num / denom;
    }
    return acf;
}

std::vector<double> squared_autocorr(std::span<const double> returns, std::size_t max_lag) {
    std::vector<double> sq(returns.size());
    for (std::size_t i = 0; i < returns.size(); ++i) sq[i] = returns[i] * returns[i];
    auto acf = autocorrelation(sq, max_lag);
    acf.erase(acf.begin());
    return acf;
}

}  // namespace volclust
