#pragma once

#include "volclust/optimize.hpp"
#include "volclust/series.hpp"
#include "volclust/volmodel.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace volclust {

enum class Innovation { Gaussian, StudentT };

struct FitConfig {
    ModelFamily family = ModelFamily::GARCH;
    Innovation innovation = Innovation::StudentT;
    std::size_t truncation = kDefaultTruncation;
    int max_iters = 2000;
    double tol = 1e-6;  // objective improvement over one NM + BFGS cycle
    int restarts = 2;   // jittered starts in addition to the default start
    std::uint64_t seed = 1;
    /// FIGARCH only: hold d at this value in (0,1) instead of estimating it.
    std::optional<double> fixed_d;
};

/// Throws DomainError on an invalid configuration.
void validate(const FitConfig& config);

enum class Significance { None, FivePercent, OnePercent };

/// "**" at 1%, "*" at 5%, "" otherwise.
[[nodiscard]] std::string_view stars(Significance s) noexcept;
/// 1% iff p < 0.01, 5% iff 0.01 <= p < 0.05.
[[nodiscard]] Significance significance_of(std::optional<double> pvalue) noexcept;

struct Coefficient {
    std::string name;  // omega, alpha, beta, d, nu
    double value = 0.0;
    std::optional<double> std_error;
    std::optional<double> pvalue;
    Significance significance = Significance::None;
};

struct FitResult {
    ModelFamily family = ModelFamily::GARCH;
    ParamVector params;
    std::vector<Coefficient> coefficients;  // estimated (free) parameters only
    std::optional<Eigen::MatrixXd> covariance;
    double loglik = 0.0;
    bool converged = false;
    int iterations = 0;
    std::size_t n_obs = 0;
    double gradient_norm = 0.0;  // unconstrained coordinates, at the optimum
    std::vector<double> start_objectives;  // best loglik reached from each start
    std::vector<std::string> diagnostics;

    [[nodiscard]] const Coefficient* find(std::string_view name) const noexcept;
};

/**
 * Maps a family's free parameters to and from R^k.
 *
 *   omega  -> log(omega)
 *   GARCH  (alpha, beta) -> (logit(alpha + beta), logit(alpha / (alpha + beta)))
 *   IGARCH alpha -> log(alpha), beta -> logit(beta)
 *   FIGARCH alpha -> alpha, beta -> logit(beta), d -> logit(d) unless fixed
 *   nu -> log(nu - 2)
 */
class Reparameterization {
public:
    Reparameterization(ModelFamily family, bool student, std::optional<double> fixed_d = std::nullopt);

    /// Throws BoundaryError for parameters on the edge of the feasible region.
    [[nodiscard]] std::vector<double> to_unconstrained(const ParamVector& p) const;
    [[nodiscard]] ParamVector from_unconstrained(std::span<const double> u) const;
    /// Names of the free parameters in coordinate order.
    [[nodiscard]] const std::vector<std::string>& names() const noexcept { return names_; }
    [[nodiscard]] std::size_t size() const noexcept { return names_.size(); }
    /// Values of the free parameters in coordinate order.
    [[nodiscard]] std::vector<double> constrained_values(const ParamVector& p) const;
    /// d(constrained)/d(unconstrained), by central differences.
    [[nodiscard]] Eigen::MatrixXd jacobian(std::span<const double> u) const;

private:
    ModelFamily family_;
    bool student_;
    std::optional<double> fixed_d_;
    std::vector<std::string> names_;
};

[[nodiscard]] std::vector<double> transform_to_unconstrained(const ParamVector& params,
                                                             ModelFamily family);

struct StandardErrors {
    std::optional<Eigen::MatrixXd> covariance;  // absent when the Hessian is not positive definite
    std::vector<std::optional<double>> std_error;
    std::vector<std::optional<double>> pvalues;
};

/**
 * Asymptotic standard errors from the inverse negative Hessian of a
 * log-likelihood at its maximum. The Hessian is taken by central differences
 * in the coordinates `theta`; when `jacobian` is given, the covariance is
 * mapped through it (delta method) before p-values are computed from
 * `estimates`.
 */
[[nodiscard]] StandardErrors hessian_standard_errors(const optim::Objective& loglik,
                                                     std::span<const double> theta,
                                                     std::span<const double> estimates,
                                                     const std::optional<Eigen::MatrixXd>& jacobian = {});

/// Constrained maximum likelihood under the constant-mean model.
/// Requires at least 50 observations.
[[nodiscard]] FitResult fit(const ReturnSeries& series, const FitConfig& config);
[[nodiscard]] FitResult fit(std::span<const double> returns, const FitConfig& config);

struct PersistenceCheck {
    double sum = 0.0;                 // alpha + beta
    std::optional<double> std_error;  // delta method
    bool flagged = false;             // sum > 0.98
    std::string recommendation;
};

/// Persistence of a GARCH fit. Throws DomainError for other families.
[[nodiscard]] PersistenceCheck persistence_check(const FitResult& fit);
[[nodiscard]] PersistenceCheck persistence_check(double alpha, double beta,
                                                 std::optional<double> se_sum = std::nullopt);

inline constexpr std::size_t kMinFitObservations = 50;
inline constexpr double kPersistenceThreshold = 0.98;
inline constexpr double kGradientTolerance = 1e-4;

}  // namespace volclust
