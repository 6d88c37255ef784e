#pragma once

#include "volclust/convolve.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace volclust {

enum class ModelFamily { GARCH, IGARCH, FIGARCH };

[[nodiscard]] std::string_view to_string(ModelFamily f) noexcept;
/// Case-insensitive; throws DomainError for anything but garch/igarch/figarch.
[[nodiscard]] ModelFamily parse_family(std::string_view name);

/// Default number of lags retained in the ARCH(inf) expansion.
inline constexpr std::size_t kDefaultTruncation = 1000;

/**
 * Parameters of a (1,1) / (1,d,1) model.
 *
 * d is pinned to 0 for GARCH and to 1 for IGARCH. `nu` carries the Student-t
 * degrees of freedom; when absent the innovations are Gaussian.
 */
struct ParamVector {
    double omega = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double d = 0.0;
    std::optional<double> nu;

    [[nodiscard]] bool student() const noexcept { return nu.has_value(); }
};

[[nodiscard]] ParamVector garch_params(double omega, double alpha, double beta,
                                       std::optional<double> nu = std::nullopt);
[[nodiscard]] ParamVector igarch_params(double omega, double alpha, double beta,
                                        std::optional<double> nu = std::nullopt);
[[nodiscard]] ParamVector figarch_params(double omega, double alpha, double beta, double d,
                                         std::optional<double> nu = std::nullopt);

/// Coefficients of the binomial expansion of (1 - L)^d, and optionally the
/// ARCH(inf) weights lambda of a FIGARCH-type variance at given (alpha, beta).
struct FracWeights {
    std::vector<double> pi;      // length T + 1, pi[0] = 1
    std::vector<double> lambda;  // length T (lambda[j-1] is the weight on lag j), or empty
    std::size_t horizon = 0;
};

/// pi[j] = pi[j-1] * (j - 1 - d) / j. Throws DomainError unless 0 <= d <= 1 and T >= 1.
[[nodiscard]] FracWeights frac_weights(double d, std::size_t T);

/**
 * Variance filter in recursive form:
 *
 *   sigma2[t] = omega + beta * sigma2[t-1] + sum_{j=1..k} taps[j-1] * e2[t-j]
 *
 * where taps are the coefficients of 1 - beta L - (1 - (alpha+beta) L)(1 - L)^d.
 * For d = 0 this is exactly the GARCH(1,1) recursion (taps = {alpha}); for
 * d = 1 it has two taps. `lambda` holds the equivalent ARCH(inf) weights,
 * lambda(L) = taps(L) / (1 - beta L), up to the truncation horizon.
 * Trailing exact zeros in `taps` are dropped.
 */
struct ArchFilter {
    double omega = 0.0;
    double beta = 0.0;
    std::vector<double> taps;
    std::vector<double> lambda;

    /// Fixed point of the recursion, omega / (1 - beta - sum(taps)), when it exists.
    [[nodiscard]] std::optional<double> steady_state() const noexcept;
};

[[nodiscard]] ArchFilter make_filter(ModelFamily family, const ParamVector& params, std::size_t T);

/// Throws InfeasibleParameters naming the first violated family invariant.
void validate(ModelFamily family, const ParamVector& params, std::size_t T = kDefaultTruncation);
/// Empty when feasible, otherwise a description of the violated invariant.
[[nodiscard]] std::string check_feasible(ModelFamily family, const ParamVector& params,
                                         std::size_t T = kDefaultTruncation);

struct VariancePath {
    std::vector<double> sigma2;
    double loglik = 0.0;
};

/**
 * Log density of a unit-variance innovation e with conditional variance
 * sigma2. Gaussian when nu is absent, otherwise the Student-t rescaled to
 * unit variance (nu > 2).
 */
[[nodiscard]] double innovation_log_density(double e, double sigma2, std::optional<double> nu);
/// Density of the standardized (unit-variance) Student-t at z.
[[nodiscard]] double standardized_t_density(double z, double nu);

/// Sum of innovation_log_density over a precomputed variance path.
[[nodiscard]] double log_likelihood(std::span<const double> innovations,
                                    std::span<const double> sigma2, std::optional<double> nu);

/**
 * Evaluates variance paths and likelihoods for one innovation series under
 * many parameter values. Pre-sample squared innovations and the pre-sample
 * variance are set to the sample mean of the squared innovations.
 *
 * Immutable after construction; evaluation is safe from multiple threads.
 */
class VarianceEvaluator {
public:
    VarianceEvaluator(std::vector<double> innovations, std::size_t T = kDefaultTruncation);

    /// nullopt when parameters violate family invariants or a variance is nonpositive.
    [[nodiscard]] std::optional<VariancePath> try_path(ModelFamily family,
                                                       const ParamVector& params) const;
    [[nodiscard]] std::optional<double> try_log_likelihood(ModelFamily family,
                                                           const ParamVector& params) const;

    [[nodiscard]] std::span<const double> innovations() const noexcept { return e_; }
    [[nodiscard]] double backcast() const noexcept { return backcast_; }
    [[nodiscard]] std::size_t horizon() const noexcept { return T_; }

private:
    std::vector<double> e_;
    double backcast_;
    std::size_t T_;
    LagFilter squares_;
};

/// Throws InfeasibleParameters on invalid parameters or nonpositive variance.
[[nodiscard]] VariancePath variance_path(ModelFamily family, const ParamVector& params,
                                         std::span<const double> innovations,
                                         std::size_t T = kDefaultTruncation);
[[nodiscard]] double log_likelihood(ModelFamily family, const ParamVector& params,
                                    std::span<const double> innovations,
                                    std::size_t T = kDefaultTruncation);

/// Subtracts the sample mean (constant conditional mean model).
[[nodiscard]] std::vector<double> demean(std::span<const double> returns);

}  // namespace volclust
