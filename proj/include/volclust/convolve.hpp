#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

namespace volclust {

/// One-sided lag filter over a fixed input sequence:
///
///   y[t] = sum_{j=1..k} taps[j-1] * x[t-j],   x[s] = presample for s < 0.
///
/// The input and its spectrum are cached so that repeated application with
/// different taps (one per likelihood evaluation) costs a single forward and
/// inverse transform. Short filters are evaluated directly. `apply` is const
/// and safe to call concurrently.
class LagFilter {
public:
    LagFilter(std::vector<double> x, double presample);
    ~LagFilter();
    LagFilter(LagFilter&&) noexcept;
    LagFilter& operator=(LagFilter&&) noexcept;

    [[nodiscard]] std::vector<double> apply(std::span<const double> taps) const;

    [[nodiscard]] std::size_t size() const noexcept { return x_.size(); }
    [[nodiscard]] double presample() const noexcept { return presample_; }

    /// Work threshold (n * k) above which the transform path is used.
    static constexpr std::size_t kDirectLimit = 100'000;

private:
    struct Spectrum;
    [[nodiscard]] const Spectrum& spectrum_for(std::size_t k) const;

    std::vector<double> x_;
    double presample_;
    mutable std::unique_ptr<Spectrum> spectrum_;
    std::unique_ptr<std::mutex> cache_mutex_;
};

/// Direct O(n*k) evaluation of the same filter. Used for short filters and as
/// a cross-check in tests.
[[nodiscard]] std::vector<double> lag_filter_direct(std::span<const double> taps,
                                                    std::span<const double> x, double presample);

}  // namespace volclust
