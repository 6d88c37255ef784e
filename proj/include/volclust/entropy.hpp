#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace volclust {

/// Equal-width cells over [min, max] of a sample. Cells are left-closed;
/// the top cell is also right-closed so the maximum is counted.
struct Histogram {
    std::vector<double> edges;        // m + 1 boundaries
    std::vector<std::size_t> counts;  // m cells
    std::vector<double> probs;        // counts / n

    [[nodiscard]] std::size_t bins() const noexcept { return counts.size(); }
};

/// Throws DomainError for empty/non-finite input or m == 0, DegenerateError
/// when every value is identical.
[[nodiscard]] Histogram build_histogram(std::span<const double> values, std::size_t m);

/// ceil(sqrt(n)), at least 1.
[[nodiscard]] std::size_t default_bins(std::size_t n) noexcept;

// Estimators in nats. Zero-probability cells contribute nothing.

[[nodiscard]] double shannon(std::span<const double> probs);
/// Order alpha > 0; within 1e-8 of 1 the Shannon value is returned.
[[nodiscard]] double renyi(std::span<const double> probs, double alpha);
/// Index q >= 0; within 1e-8 of 1 the Shannon value is returned.
[[nodiscard]] double tsallis(std::span<const double> probs, double q);

[[nodiscard]] inline double shannon(const Histogram& h) { return shannon(h.probs); }
[[nodiscard]] inline double renyi(const Histogram& h, double alpha) { return renyi(h.probs, alpha); }
[[nodiscard]] inline double tsallis(const Histogram& h, double q) { return tsallis(h.probs, q); }

inline const std::vector<double> kDefaultEntropyGrid{1.4, 1.45, 1.5};

struct EntropyReport {
    double shannon = 0.0;
    std::vector<std::pair<double, double>> renyi;    // (alpha, value)
    std::vector<std::pair<double, double>> tsallis;  // (q, value)
    std::size_t bins = 0;
    std::size_t n_obs = 0;
    std::vector<std::string> warnings;
};

/// One histogram, all estimators. `bins` defaults to default_bins(n). A
/// Tsallis index outside [1, 5/3) adds a warning (infinite-variance regime).
[[nodiscard]] EntropyReport entropy_report(std::span<const double> values,
                                           std::optional<std::size_t> bins = std::nullopt,
                                           std::span<const double> alpha_grid = kDefaultEntropyGrid,
                                           std::span<const double> q_grid = kDefaultEntropyGrid);

struct WindowEntropy {
    std::size_t begin = 0;  // first index in the window
    std::size_t end = 0;    // one past the last index
    EntropyReport report;
};

/// Entropy reports over windows [s, s + window) for s = 0, step, 2*step, ...
/// that fit entirely in the sample.
[[nodiscard]] std::vector<WindowEntropy> windowed_entropy(std::span<const double> values,
                                                          std::size_t window, std::size_t step,
                                                          std::optional<std::size_t> bins,
                                                          std::span<const double> alpha_grid,
                                                          std::span<const double> q_grid);

}  // namespace volclust
