#include "volclust/convolve.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <mutex>

namespace volclust {

namespace {

// The FFTW planner is not reentrant; execution on distinct buffers is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwDeleter {
    void operator()(void* p) const noexcept { fftw_free(p); }
};
template <class T>
using FftwBuffer = std::unique_ptr<T[], FftwDeleter>;

template <class T>
FftwBuffer<T> fftw_alloc(std::size_t count) {
    return FftwBuffer<T>(static_cast<T*>(fftw_malloc(sizeof(T) * count)));
}

}  // namespace

struct LagFilter::Spectrum {
    std::size_t length = 0;  // transform length
    std::size_t max_taps = 0;
    FftwBuffer<fftw_complex> x_hat;
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;

    ~Spectrum() {
        std::lock_guard lock(planner_mutex());
        if (forward) fftw_destroy_plan(forward);
        if (inverse) fftw_destroy_plan(inverse);
    }
};

std::vector<double> lag_filter_direct(std::span<const double> taps, std::span<const double> x,
                                      double presample) {
    const std::size_t n = x.size();
    const std::size_t k = taps.size();
    // tail[m] = sum_{j>m} taps[j-1]: weight carried by pre-sample values at time m
    std::vector<double> tail(k + 1, 0.0);
    for (std::size_t j = k; j-- > 0;) tail[j] = tail[j + 1] + taps[j];

    std::vector<double> y(n, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t lim = std::min(t, k);
        double acc = 0.0;
        for (std::size_t j = 1; j <= lim; ++j) acc += taps[j - 1] * x[t - j];
        if (t < k) acc += presample * tail[t];
        y[t] = acc;
    }
    return y;
}

LagFilter::LagFilter(std::vector<double> x, double presample)
    : x_(std::move(x)), presample_(presample), cache_mutex_(std::make_unique<std::mutex>()) {}

LagFilter::~LagFilter() = default;
LagFilter::LagFilter(LagFilter&&) noexcept = default;
LagFilter& LagFilter::operator=(LagFilter&&) noexcept = default;

const LagFilter::Spectrum& LagFilter::spectrum_for(std::size_t k) const {
    if (spectrum_ && spectrum_->max_taps >= k) return *spectrum_;

    auto s = std::make_unique<Spectrum>();
    s->length = std::bit_ceil(x_.size() + k + 1);
    s->max_taps = s->length - x_.size() - 1;
    const std::size_t bins = s->length / 2 + 1;
    auto real = fftw_alloc<double>(s->length);
    s->x_hat = fftw_alloc<fftw_complex>(bins);
    {
        std::lock_guard lock(planner_mutex());
        s->forward = fftw_plan_dft_r2c_1d(static_cast<int>(s->length), real.get(), s->x_hat.get(),
                                          FFTW_ESTIMATE);
        s->inverse = fftw_plan_dft_c2r_1d(static_cast<int>(s->length), s->x_hat.get(), real.get(),
                                          FFTW_ESTIMATE | FFTW_DESTROY_INPUT);
    }
    std::fill(real.get(), real.get() + s->length, 0.0);
    std::copy(x_.begin(), x_.end(), real.get());
    fftw_execute_dft_r2c(s->forward, real.get(), s->x_hat.get());
    spectrum_ = std::move(s);
    return *spectrum_;
}

std::vector<double> LagFilter::apply(std::span<const double> taps) const {
    const std::size_t n = x_.size();
    const std::size_t k = taps.size();
    if (k == 0) return std::vector<double>(n, 0.0);
    if (n * k <= kDirectLimit) return lag_filter_direct(taps, x_, presample_);

    const Spectrum* sp = nullptr;
    {
        std::lock_guard lock(*cache_mutex_);
        sp = &spectrum_for(k);
    }
    const Spectrum& s = *sp;
    const std::size_t bins = s.length / 2 + 1;
    auto real = fftw_alloc<double>(s.length);
    auto spec = fftw_alloc<fftw_complex>(bins);

    // h[0] = 0, h[j] = taps[j-1]: the filter only looks strictly into the past.
    std::fill(real.get(), real.get() + s.length, 0.0);
    std::copy(taps.begin(), taps.end(), real.get() + 1);
    fftw_execute_dft_r2c(s.forward, real.get(), spec.get());
    for (std::size_t i = 0; i < bins; ++i) {
        const double ar = spec[i][0], ai = spec[i][1];
        const double br = s.x_hat[i][0], bi = s.x_hat[i][1];
        spec[i][0] = ar * br - ai * bi;
        spec[i][1] = ar * bi + ai * br;
    }
    fftw_execute_dft_c2r(s.inverse, spec.get(), real.get());

    std::vector<double> tail(k + 1, 0.0);
    for (std::size_t j = k; j-- > 0;) tail[j] = tail[j + 1] + taps[j];

    const double scale = 1.0 / static_cast<double>(s.length);
    std::vector<double> y(n);
    for (std::size_t t = 0; t < n; ++t) {
        y[t] = real[t] * scale;
        if (t < k) y[t] += presample_ * tail[t];
    }
    return y;
}

}  // namespace volclust
