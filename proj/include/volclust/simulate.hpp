#pragma once

#include "volclust/series.hpp"
#include "volclust/volmodel.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace volclust {

struct SimConfig {
    ModelFamily family = ModelFamily::GARCH;
    ParamVector params;  // nu present: standardized Student-t draws, else Gaussian
    std::size_t n = 1000;
    std::size_t burn_in = 2000;
    std::size_t truncation = kDefaultTruncation;
    std::uint64_t seed = 1;
};

struct SimResult {
    ReturnSeries series;  // e_t = z_t * sigma_t, dated on consecutive days from 2000-01-01
    VariancePath path;    // sigma2 used for each emitted observation, loglik at the true params
    std::vector<double> shocks;  // the standardized draws z_t
};

/**
 * Simulates a path by running the variance recursion of make_filter forward
 * on its own output. The pre-sample squared innovations and variance start at
 * the recursion's steady state (omega / (1 - beta) when it has none) and the
 * first `burn_in` draws are discarded. Deterministic given the seed.
 *
 * Throws InfeasibleParameters before drawing when the parameters violate the
 * family invariants.
 */
[[nodiscard]] SimResult simulate_path(const SimConfig& config);

/// Sample autocorrelations at lags 0..max_lag.
[[nodiscard]] std::vector<double> autocorrelation(std::span<const double> x, std::size_t max_lag);

/// Sample autocorrelations of x^2 at lags 1..max_lag. Throws DegenerateError
/// for a constant squared series, DomainError unless size > max_lag >= 1.
[[nodiscard]] std::vector<double> squared_autocorr(std::span<const double> returns, std::size_t max_lag);

}  // namespace volclust
