#include "volclust/volmodel.hpp"

#include "volclust/errors.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <numeric>

namespace volclust {

namespace {

double pinned_d(ModelFamily family, const ParamVector& p) {
    switch (family) {
        case ModelFamily::GARCH: return 0.0;
        case ModelFamily::IGARCH: return 1.0;
        case ModelFamily::FIGARCH: return p.d;
    }
    return p.d;
}

struct DensityConstants {
    bool student = false;
    double nu = 0.0;
    double norm = 0.0;   // additive constant per observation
    double scale = 0.0;  // 1 / (nu - 2)
    double power = 0.0;  // (nu + 1) / 2
};

DensityConstants density_constants(std::optional<double> nu) {
    DensityConstants c;
    if (!nu) {
        c.norm = -0.5 * std::log(2.0 * std::numbers::pi);
        return c;
    }
    c.student = true;
    c.nu = *nu;
    // log Gamma((nu+1)/2) - log Gamma(nu/2) from the ratio directly; the
    // difference of two lgamma values loses all precision for large nu.
    c.norm = -std::log(boost::math::tgamma_delta_ratio(0.5 * c.nu, 0.5)) -
             0.5 * std::log(std::numbers::pi * (c.nu - 2.0));
    c.scale = 1.0 / (c.nu - 2.0);
    c.power = 0.5 * (c.nu + 1.0);
    return c;
}

inline double log_density(const DensityConstants& c, double e, double sigma2) {
    if (!c.student) return c.norm - 0.5 * std::log(sigma2) - 0.5 * e * e / sigma2;
    return c.norm - 0.5 * std::log(sigma2) - c.power * std::log1p(e * e * c.scale / sigma2);
}

}  // namespace

std::string_view to_string(ModelFamily f) noexcept {
    switch (f) {
        case ModelFamily::GARCH: return "GARCH";
        case ModelFamily::IGARCH: return "IGARCH";
        case ModelFamily::FIGARCH: return "FIGARCH";
    }
    return "?";
}

ModelFamily parse_family(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (lower == "garch") return ModelFamily::GARCH;
    if (lower == "igarch") return ModelFamily::IGARCH;
    if (lower == "figarch") return ModelFamily::FIGARCH;
    throw DomainError("unknown model family '" + std::string(name) +
                      "' (expected garch, igarch or figarch)");
}

ParamVector garch_params(double omega, double alpha, double beta, std::optional<double> nu) {
    return {omega, alpha, beta, 0.0, nu};
}

ParamVector igarch_params(double omega, double alpha, double beta, std::optional<double> nu) {
    return {omega, alpha, beta, 1.0, nu};
}

ParamVector figarch_params(double omega, double alpha, double beta, double d,
                           std::optional<double> nu) {
    return {omega, alpha, beta, d, nu};
}

FracWeights frac_weights(double d, std::size_t T) {
    if (!(d >= 0.0 && d <= 1.0)) throw DomainError("d must lie in [0,1], got " + std::to_string(d));
    if (T < 1) throw DomainError("truncation horizon must be at least 1");
    FracWeights w;
    w.horizon = T;
    w.pi.resize(T + 1);
    w.pi[0] = 1.0;
    for (std::size_t j = 1; j <= T; ++j) {
        const double jj = static_cast<double>(j);
        w.pi[j] = w.pi[j - 1] * (jj - 1.0 - d) / jj;
    }
    return w;
}

std::optional<double> ArchFilter::steady_state() const noexcept {
    const double denom = 1.0 - beta - std::accumulate(taps.begin(), taps.end(), 0.0);
    if (!(denom > 1e-12)) return std::nullopt;
    return omega / denom;
}

ArchFilter make_filter(ModelFamily family, const ParamVector& params, std::size_t T) {
    const double d = pinned_d(family, params);
    const auto w = frac_weights(d, T);
    const double phi = params.alpha + params.beta;

    ArchFilter f;
    f.omega = params.omega;
    f.beta = params.beta;
    f.taps.resize(T);
    // pi[1] = -d, so the lag-1 coefficient -beta - pi[1] + phi reduces to alpha + d.
    f.taps[0] = params.alpha + d;
    for (std::size_t j = 2; j <= T; ++j) f.taps[j - 1] = phi * w.pi[j - 1] - w.pi[j];

    f.lambda.resize(T);
    double prev = 0.0;
    for (std::size_t j = 0; j < T; ++j) {
        prev = params.beta * prev + f.taps[j];
        f.lambda[j] = prev;
    }
    while (!f.taps.empty() && f.taps.back() == 0.0) f.taps.pop_back();
    return f;
}

std::string check_feasible(ModelFamily family, const ParamVector& p, std::size_t T) {
    if (!(std::isfinite(p.omega) && p.omega > 0.0)) return "omega must be > 0";
    if (!std::isfinite(p.alpha) || !std::isfinite(p.beta) || !std::isfinite(p.d))
        return "parameters must be finite";
    if (p.nu && !(std::isfinite(*p.nu) && *p.nu > 2.0)) return "nu must be > 2";
    switch (family) {
        case ModelFamily::GARCH:
            if (p.d != 0.0) return "d must be 0 for GARCH";
            if (p.alpha < 0.0) return "alpha must be >= 0";
            if (p.beta < 0.0) return "beta must be >= 0";
            if (!(p.alpha + p.beta < 1.0)) return "alpha + beta must be < 1";
            return {};
        case ModelFamily::IGARCH:
            if (p.d != 1.0) return "d must be 1 for IGARCH";
            if (p.alpha < 0.0) return "alpha must be >= 0";
            if (p.beta < 0.0 || !(p.beta < 1.0)) return "beta must lie in [0,1)";
            return {};
        case ModelFamily::FIGARCH: {
            if (!(p.d >= 0.0 && p.d <= 1.0)) return "d must lie in [0,1]";
            if (p.beta < 0.0 || !(p.beta < 1.0)) return "beta must lie in [0,1)";
            if (T < 1) return "truncation horizon must be at least 1";
            // Nonnegative lambda is sufficient, not necessary. At d = 1 it
            // fails for every alpha > 0 (lambda_2 = alpha (beta - 1)), so the
            // IGARCH rules apply there and positivity is checked on the path.
            if (p.d == 1.0) return p.alpha < 0.0 ? "alpha must be >= 0" : std::string{};
            const auto f = make_filter(family, p, T);
            for (std::size_t j = 0; j < f.lambda.size(); ++j)
                if (f.lambda[j] < 0.0)
                    return "ARCH(inf) weight lambda_" + std::to_string(j + 1) + " is negative";
            return {};
        }
    }
    return {};
}

void validate(ModelFamily family, const ParamVector& params, std::size_t T) {
    if (auto msg = check_feasible(family, params, T); !msg.empty())
        throw InfeasibleParameters(std::string(to_string(family)) + ": " + msg);
}

double innovation_log_density(double e, double sigma2, std::optional<double> nu) {
    if (nu && !(*nu > 2.0)) throw DomainError("nu must be > 2");
    if (!(sigma2 > 0.0)) throw DomainError("variance must be > 0");
    return log_density(density_constants(nu), e, sigma2);
}

double standardized_t_density(double z, double nu) {
    return std::exp(innovation_log_density(z, 1.0, nu));
}

double log_likelihood(std::span<const double> innovations, std::span<const double> sigma2,
                      std::optional<double> nu) {
    if (innovations.size() != sigma2.size())
        throw DomainError("innovation and variance paths differ in length");
    const auto c = density_constants(nu);
    // Compensated (Neumaier) summation keeps finite-difference derivatives of
    // long-sample likelihoods above rounding noise.
    double sum = 0.0, comp = 0.0;
    for (std::size_t t = 0; t < innovations.size(); ++t) {
        const double term = log_density(c, innovations[t], sigma2[t]);
        const double next = sum + term;
        comp += std::abs(sum) >= std::abs(term) ? (sum - next) + term : (term - next) + sum;
        sum = next;
    }
    return sum + comp;
}

namespace {

std::vector<double> squares(std::span<const double> e) {
    std::vector<double> out(e.size());
    std::transform(e.begin(), e.end(), out.begin(), [](double x) { return x * x; });
    return out;
}

double mean_of(std::span<const double> v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

VarianceEvaluator::VarianceEvaluator(std::vector<double> innovations, std::size_t T)
    : e_(std::move(innovations)),
      backcast_(0.0),
      T_(T),
      squares_(std::vector<double>{}, 0.0) {
    if (e_.empty()) throw InsufficientDataError("no observations");
    for (double x : e_)
        if (!std::isfinite(x)) throw DataQualityError("innovations contain non-finite values");
    if (T_ < 1) throw DomainError("truncation horizon must be at least 1");
    auto sq = squares(e_);
    backcast_ = mean_of(sq);
    squares_ = LagFilter(std::move(sq), backcast_);
}

std::optional<VariancePath> VarianceEvaluator::try_path(ModelFamily family,
                                                        const ParamVector& params) const {
    if (!check_feasible(family, params, T_).empty()) return std::nullopt;
    const auto filter = make_filter(family, params, T_);
    const auto conv = squares_.apply(filter.taps);

    VariancePath path;
    path.sigma2.resize(e_.size());
    double prev = backcast_;
    for (std::size_t t = 0; t < e_.size(); ++t) {
        const double s = filter.omega + filter.beta * prev + conv[t];
        if (!(s > 0.0) || !std::isfinite(s)) return std::nullopt;
        path.sigma2[t] = s;
        prev = s;
    }
    path.loglik = log_likelihood(e_, path.sigma2, params.nu);
    if (!std::isfinite(path.loglik)) return std::nullopt;
    return path;
}

std::optional<double> VarianceEvaluator::try_log_likelihood(ModelFamily family,
                                                            const ParamVector& params) const {
    auto p = try_path(family, params);
    if (!p) return std::nullopt;
    return p->loglik;
}

VariancePath variance_path(ModelFamily family, const ParamVector& params,
                           std::span<const double> innovations, std::size_t T) {
    validate(family, params, T);
    VarianceEvaluator eval({innovations.begin(), innovations.end()}, T);
    auto path = eval.try_path(family, params);
    if (!path)
        throw InfeasibleParameters(std::string(to_string(family)) +
                                   ": nonpositive conditional variance encountered");
    return *std::move(path);
}

double log_likelihood(ModelFamily family, const ParamVector& params,
                      std::span<const double> innovations, std::size_t T) {
    return variance_path(family, params, innovations, T).loglik;
}

std::vector<double> demean(std::span<const double> returns) {
    const double m = mean_of(returns);
    std::vector<double> out(returns.size());
    std::transform(returns.begin(), returns.end(), out.begin(), [m](double x) { return x - m; });
    return out;
}

}  // namespace volclust
