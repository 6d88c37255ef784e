#include "volclust/entropy.hpp"

#include "volclust/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace volclust {

namespace {

constexpr double kUnitOrderBand = 1e-8;

// sum_i p_i^r - 1, computed as sum_i p_i * expm1((r - 1) ln p_i) to stay
// accurate as r -> 1.
double power_sum_minus_one(std::span<const double> probs, double r) {
    double s = 0.0;
    for (double p : probs)
        if (p > 0.0) s += p * std::expm1((r - 1.0) * std::log(p));
    return s;
}

}  // namespace

std::size_t default_bins(std::size_t n) noexcept {
    const auto m = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    return std::max<std::size_t>(m, 1);
}

Histogram build_histogram(std::span<const double> values, std::size_t m) {
    if (values.empty()) throw DomainError("histogram of an empty sample");
    if (m < 1) throw DomainError("bin count must be >= 1");
    double lo = values.front(), hi = values.front();
    for (double v : values) {
        if (!std::isfinite(v)) throw DomainError("histogram input contains non-finite values");
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!(hi > lo)) throw DegenerateError("all values identical: histogram support has zero width");

    Histogram h;
    h.edges.resize(m + 1);
    const double range = hi - lo;
    const double md = static_cast<double>(m);
    for (std::size_t i = 0; i <= m; ++i) h.edges[i] = lo + range * (static_cast<double>(i) / md);
    h.edges[m] = hi;

    h.counts.assign(m, 0);
    for (double v : values) {
        auto i = static_cast<std::size_t>(std::floor((v - lo) / range * md));
        if (i >= m) i = m - 1;
        ++h.counts[i];
    }
    h.probs.resize(m);
    const double n = static_cast<double>(values.size());
    for (std::size_t i = 0; i < m; ++i) h.probs[i] = static_cast<double>(h.counts[i]) / n;
    return h;
}

double shannon(std::span<const double> probs) {
    double s = 0.0;
    for (double p : probs)
        if (p > 0.0) s -= p * std::log(p);
    return s + 0.0;  // no negative zero
}

double renyi(std::span<const double> probs, double alpha) {
    if (!(alpha > 0.0)) throw DomainError("Renyi order must be > 0");
    if (std::abs(alpha - 1.0) <= kUnitOrderBand) return shannon(probs);
    // log1p keeps precision near alpha = 1; far from it the power sum can be
    // tiny and 1 + (sum - 1) would cancel, so take its logarithm directly.
    const double s = power_sum_minus_one(probs, alpha);
    if (std::abs(s) < 0.5) return std::log1p(s) / (1.0 - alpha) + 0.0;
    double sum = 0.0;
    for (double p : probs)
        if (p > 0.0) sum += std::pow(p, alpha);
    return std::log(sum) / (1.0 - alpha) + 0.0;
}

double tsallis(std::span<const double> probs, double q) {
    if (!(q >= 0.0)) throw DomainError("Tsallis index must be >= 0");
    if (std::abs(q - 1.0) <= kUnitOrderBand) return shannon(probs);
    return -power_sum_minus_one(probs, q) / (q - 1.0) + 0.0;
}

EntropyReport entropy_report(std::span<const double> values, std::optional<std::size_t> bins,
                             std::span<const double> alpha_grid, std::span<const double> q_grid) {
    if (alpha_grid.empty() || q_grid.empty()) throw DomainError("entropy grids must be nonempty");
    for (double a : alpha_grid)
        if (!(a > 0.0)) throw DomainError("Renyi order must be > 0");
    for (double q : q_grid)
        if (!(q >= 0.0)) throw DomainError("Tsallis index must be >= 0");

    EntropyReport r;
    r.n_obs = values.size();
    r.bins = bins.value_or(default_bins(values.size()));
    const Histogram h = build_histogram(values, r.bins);
    r.shannon = shannon(h);
    for (double a : alpha_grid) r.renyi.emplace_back(a, renyi(h, a));
    for (double q : q_grid) {
        r.tsallis.emplace_back(q, tsallis(h, q));
        if (q < 1.0 || q >= 5.0 / 3.0) {
            std::ostringstream msg;
            msg << "Tsallis index q = " << q << " lies outside [1, 5/3) required for finite variance";
            r.warnings.push_back(msg.str());
        }
    }
    return r;
}

std::vector<WindowEntropy> windowed_entropy(std::span<const double> values, std::size_t window,
                                            std::size_t step, std::optional<std::size_t> bins,
                                            std::span<const double> alpha_grid,
                                            std::span<const double> q_grid) {
    if (window < 2) throw DomainError("window must be >= 2");
    if (step < 1) throw DomainError("step must be >= 1");
    if (window > values.size()) throw InsufficientDataError("window longer than the series");
    std::vector<WindowEntropy> out;
    for (std::size_t s = 0; s + window <= values.size(); s += step)
        out.push_back({s, s + window, entropy_report(values.subspan(s, window), bins, alpha_grid, q_grid)});
    return out;
}

}  // namespace volclust
