#include "volclust/estimate.hpp"

#include "volclust/errors.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

namespace volclust {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double logit(double p) { return std::log(p / (1.0 - p)); }
double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void require_open_unit(double v, const char* what) {
    if (!(v > 0.0 && v < 1.0))
        throw BoundaryError(std::string(what) + " = " + std::to_string(v) +
                            " is on or outside the boundary of (0,1); nudge it into the interior");
}

void require_positive(double v, const char* what) {
    if (!(v > 0.0))
        throw BoundaryError(std::string(what) + " = " + std::to_string(v) +
                            " must be strictly positive; nudge it into the interior");
}

}  // namespace

void validate(const FitConfig& c) {
    if (!(c.tol > 0.0)) throw DomainError("tol must be > 0");
    if (c.max_iters < 1) throw DomainError("max_iters must be >= 1");
    if (c.restarts < 0) throw DomainError("restarts must be >= 0");
    if (c.truncation < 1) throw DomainError("truncation must be >= 1");
    if (c.fixed_d) {
        if (c.family != ModelFamily::FIGARCH) throw DomainError("a fixed d applies to FIGARCH only");
        if (*c.fixed_d == 1.0) throw DomainError("d fixed at 1 is IGARCH: use --family igarch");
        if (*c.fixed_d == 0.0) throw DomainError("d fixed at 0 is GARCH: use --family garch");
        if (!(*c.fixed_d > 0.0 && *c.fixed_d < 1.0)) throw DomainError("d must lie in [0,1]");
    }
}

std::string_view stars(Significance s) noexcept {
    switch (s) {
        case Significance::OnePercent: return "**";
        case Significance::FivePercent: return "*";
        case Significance::None: return "";
    }
    return "";
}

Significance significance_of(std::optional<double> p) noexcept {
    if (!p) return Significance::None;
    if (*p < 0.01) return Significance::OnePercent;
    if (*p < 0.05) return Significance::FivePercent;
    return Significance::None;
}

const Coefficient* FitResult::find(std::string_view name) const noexcept {
    for (const auto& c : coefficients)
        if (c.name == name) return &c;
    return nullptr;
}

// ---------------------------------------------------------------------------

Reparameterization::Reparameterization(ModelFamily family, bool student, std::optional<double> fixed_d)
    : family_(family), student_(student), fixed_d_(fixed_d) {
    names_ = {"omega", "alpha", "beta"};
    if (family_ == ModelFamily::FIGARCH && !fixed_d_) names_.push_back("d");
    if (student_) names_.push_back("nu");
}

std::vector<double> Reparameterization::to_unconstrained(const ParamVector& p) const {
    std::vector<double> u;
    u.reserve(names_.size());
    require_positive(p.omega, "omega");
    u.push_back(std::log(p.omega));
    switch (family_) {
        case ModelFamily::GARCH: {
            require_positive(p.alpha, "alpha");
            require_positive(p.beta, "beta");
            const double s = p.alpha + p.beta;
            require_open_unit(s, "alpha + beta");
            u.push_back(logit(s));
            u.push_back(logit(p.alpha / s));
            break;
        }
        case ModelFamily::IGARCH:
            require_positive(p.alpha, "alpha");
            require_open_unit(p.beta, "beta");
            u.push_back(std::log(p.alpha));
            u.push_back(logit(p.beta));
            break;
        case ModelFamily::FIGARCH:
            if (!std::isfinite(p.alpha)) throw BoundaryError("alpha must be finite");
            require_open_unit(p.beta, "beta");
            u.push_back(p.alpha);
            u.push_back(logit(p.beta));
            if (!fixed_d_) {
                require_open_unit(p.d, "d");
                u.push_back(logit(p.d));
            }
            break;
    }
    if (student_) {
        if (!p.nu) throw DomainError("Student-t parameterization needs nu");
        if (!(*p.nu > 2.0)) throw BoundaryError("nu must be > 2; nudge it into the interior");
        u.push_back(std::log(*p.nu - 2.0));
    }
    return u;
}

ParamVector Reparameterization::from_unconstrained(std::span<const double> u) const {
    if (u.size() != names_.size()) throw DomainError("coordinate vector has the wrong length");
    ParamVector p;
    std::size_t i = 0;
    p.omega = std::exp(u[i++]);
    switch (family_) {
        case ModelFamily::GARCH: {
            const double s = logistic(u[i++]);
            const double w = logistic(u[i++]);
            p.alpha = s * w;
            p.beta = s * (1.0 - w);
            p.d = 0.0;
            break;
        }
        case ModelFamily::IGARCH:
            p.alpha = std::exp(u[i++]);
            p.beta = logistic(u[i++]);
            p.d = 1.0;
            break;
        case ModelFamily::FIGARCH:
            p.alpha = u[i++];
            p.beta = logistic(u[i++]);
            p.d = fixed_d_ ? *fixed_d_ : logistic(u[i++]);
            break;
    }
    if (student_) p.nu = 2.0 + std::exp(u[i++]);
    return p;
}

std::vector<double> Reparameterization::constrained_values(const ParamVector& p) const {
    std::vector<double> v{p.omega, p.alpha, p.beta};
    if (family_ == ModelFamily::FIGARCH && !fixed_d_) v.push_back(p.d);
    if (student_) v.push_back(p.nu.value_or(std::numeric_limits<double>::quiet_NaN()));
    return v;
}

Eigen::MatrixXd Reparameterization::jacobian(std::span<const double> u) const {
    const auto k = static_cast<Eigen::Index>(u.size());
    Eigen::MatrixXd J(k, k);
    std::vector<double> x(u.begin(), u.end());
    for (Eigen::Index j = 0; j < k; ++j) {
        const auto jj = static_cast<std::size_t>(j);
        const double h = 1e-6 * std::max(1.0, std::abs(u[jj]));
        x[jj] = u[jj] + h;
        const auto vp = constrained_values(from_unconstrained(x));
        x[jj] = u[jj] - h;
        const auto vm = constrained_values(from_unconstrained(x));
        x[jj] = u[jj];
        for (Eigen::Index i = 0; i < k; ++i) {
            const auto ii = static_cast<std::size_t>(i);
            J(i, j) = (vp[ii] - vm[ii]) / (2.0 * h);
        }
    }
    return J;
}

std::vector<double> transform_to_unconstrained(const ParamVector& params, ModelFamily family) {
    return Reparameterization(family, params.student()).to_unconstrained(params);
}

// ---------------------------------------------------------------------------

StandardErrors hessian_standard_errors(const optim::Objective& loglik, std::span<const double> theta,
                                       std::span<const double> estimates,
                                       const std::optional<Eigen::MatrixXd>& jacobian) {
    const std::size_t k = estimates.size();
    StandardErrors out;
    out.std_error.assign(k, std::nullopt);
    out.pvalues.assign(k, std::nullopt);

    const optim::Objective negative = [&](std::span<const double> x) { return -loglik(x); };
    const Eigen::MatrixXd H = optim::hessian(negative, theta);
    auto cov = optim::inverse_if_positive_definite(H);
    if (!cov) return out;
    if (jacobian) *cov = (*jacobian) * (*cov) * jacobian->transpose();
    if (static_cast<std::size_t>(cov->rows()) != k) throw DomainError("jacobian and estimates disagree in size");
    out.covariance = *cov;
    for (std::size_t i = 0; i < k; ++i) {
        const double var = (*cov)(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
        if (!(var > 0.0) || !std::isfinite(var)) continue;
        const double se = std::sqrt(var);
        out.std_error[i] = se;
        out.pvalues[i] = std::erfc(std::abs(estimates[i] / se) / std::numbers::sqrt2);
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

struct StartOutcome {
    std::vector<double> u;
    double f = kInf;
    int iterations = 0;
    bool stable = false;
};

StartOutcome optimize_from(const optim::Objective& f, std::vector<double> u, const FitConfig& cfg) {
    StartOutcome out;
    double best = f(u);
    if (!std::isfinite(best)) return out;
    constexpr int kMaxCycles = 8;
    for (int cycle = 0; cycle < kMaxCycles; ++cycle) {
        optim::NelderMeadOptions nm_opts;
        nm_opts.max_iterations = cfg.max_iters;
        nm_opts.ftol = cfg.tol;
        nm_opts.xtol = 1e-6;
        const auto nm = optim::nelder_mead(f, u, nm_opts);
        optim::QuasiNewtonOptions qn_opts;
        qn_opts.max_iterations = std::max(50, cfg.max_iters / 10);
        qn_opts.gtol = 1e-6;
        const auto qn = optim::bfgs(f, nm.x, qn_opts);
        out.iterations += nm.iterations + qn.iterations;
        const double improvement = best - qn.f;
        if (qn.f <= best) {
            u = qn.x;
            best = qn.f;
        }
        if (improvement < cfg.tol) {
            out.stable = true;
            break;
        }
    }
    const auto polished = optim::newton_polish(f, u, 8, 1e-7);
    out.iterations += polished.iterations;
    if (polished.f <= best) {
        u = polished.x;
        best = polished.f;
    }
    out.u = std::move(u);
    out.f = best;
    return out;
}

ParamVector initial_params(const FitConfig& cfg, double variance) {
    constexpr double a0 = 0.05, b0 = 0.90, d0 = 0.5, nu0 = 8.0;
    ParamVector p;
    p.omega = 0.1 * variance * (1.0 - a0 - b0);
    p.alpha = a0;
    p.beta = b0;
    switch (cfg.family) {
        case ModelFamily::GARCH: p.d = 0.0; break;
        case ModelFamily::IGARCH: p.d = 1.0; break;
        case ModelFamily::FIGARCH: p.d = cfg.fixed_d.value_or(d0); break;
    }
    if (cfg.innovation == Innovation::StudentT) p.nu = nu0;
    return p;
}

ParamVector jitter(const ParamVector& base, const FitConfig& cfg, std::mt19937_64& rng, double spread) {
    std::uniform_real_distribution<double> u(1.0 - spread, 1.0 + spread);
    ParamVector p = base;
    p.omega *= u(rng);
    p.alpha *= u(rng);
    p.beta = std::min(p.beta * u(rng), 0.999);
    if (cfg.family == ModelFamily::GARCH && p.alpha + p.beta >= 1.0) {
        const double s = (p.alpha + p.beta) / 0.995;
        p.alpha /= s;
        p.beta /= s;
    }
    if (cfg.family == ModelFamily::FIGARCH && !cfg.fixed_d) p.d = std::clamp(p.d * u(rng), 0.01, 0.99);
    if (p.nu) p.nu = 2.0 + (*p.nu - 2.0) * u(rng);
    return p;
}

}  // namespace

FitResult fit(const ReturnSeries& series, const FitConfig& config) {
    return fit(std::span<const double>(series.returns), config);
}

FitResult fit(std::span<const double> returns, const FitConfig& config) {
    validate(config);
    if (returns.size() < kMinFitObservations)
        throw InsufficientDataError("fitting needs at least " + std::to_string(kMinFitObservations) +
                                    " observations, got " + std::to_string(returns.size()));
    for (double r : returns)
        if (!std::isfinite(r)) throw DataQualityError("returns contain non-finite values");
    if (std::adjacent_find(returns.begin(), returns.end(), std::not_equal_to<>()) == returns.end())
        throw DataQualityError("constant series: zero sample variance");

    const VarianceEvaluator eval(demean(returns), config.truncation);
    if (!(eval.backcast() > 0.0)) throw DataQualityError("constant series: zero sample variance");

    const bool student = config.innovation == Innovation::StudentT;
    const Reparameterization rep(config.family, student, config.fixed_d);
    const optim::Objective objective = [&](std::span<const double> u) {
        const auto ll = eval.try_log_likelihood(config.family, rep.from_unconstrained(u));
        return ll ? -*ll : kInf;
    };

    std::mt19937_64 rng(config.seed);
    const ParamVector base = initial_params(config, eval.backcast());

    // Start i is the default point (i = 0) or a +-20% jitter of it. Infeasible
    // starts are repaired by halving alpha and redrawing.
    auto feasible_start = [&](ParamVector p) -> std::optional<std::vector<double>> {
        for (int attempt = 0; attempt < 60; ++attempt) {
            try {
                auto u = rep.to_unconstrained(p);
                if (std::isfinite(objective(u))) return u;
            } catch (const BoundaryError&) {
            }
            p = jitter(base, config, rng, 0.2 + 0.01 * attempt);
            p.alpha *= std::pow(0.5, attempt / 10);
        }
        return std::nullopt;
    };

    FitResult result;
    result.family = config.family;
    result.n_obs = returns.size();

    StartOutcome best;
    bool any_start = false;
    for (int s = 0; s <= config.restarts; ++s) {
        const ParamVector p = s == 0 ? base : jitter(base, config, rng, 0.2);
        const auto u0 = feasible_start(p);
        if (!u0) {
            result.start_objectives.push_back(-kInf);
            continue;
        }
        any_start = true;
        auto outcome = optimize_from(objective, *u0, config);
        result.start_objectives.push_back(-outcome.f);
        result.iterations += outcome.iterations;
        if (outcome.f < best.f) best = std::move(outcome);  // ties keep the earlier start
    }
    if (!any_start || !std::isfinite(best.f))
        throw EstimationError(std::string(to_string(config.family)) +
                              ": no feasible starting point; every start was infeasible");

    result.params = rep.from_unconstrained(best.u);
    const auto ll = eval.try_log_likelihood(config.family, result.params);
    if (!ll) throw EstimationError("optimum is not feasible on re-evaluation");
    result.loglik = *ll;

    const Eigen::VectorXd g = optim::gradient(objective, best.u);
    result.gradient_norm = g.allFinite() ? g.norm() : kInf;
    result.converged = best.stable && result.gradient_norm < kGradientTolerance;

    const auto values = rep.constrained_values(result.params);
    const optim::Objective loglik = [&](std::span<const double> u) { return -objective(u); };
    const Eigen::MatrixXd jac = rep.jacobian(best.u);
    auto se = hessian_standard_errors(loglik, best.u, values, jac);
    // With near-Gaussian data the likelihood is flat in nu and the full
    // Hessian is singular. The remaining parameters still have a well-defined
    // curvature with nu held at its estimate.
    bool conditional_on_nu = false;
    if (!se.covariance && student && result.params.nu && *result.params.nu > 100.0 && values.size() > 1) {
        const std::size_t k = values.size() - 1;  // nu is the last coordinate
        const double u_nu = best.u.back();
        const optim::Objective reduced = [&](std::span<const double> v) {
            std::vector<double> u(v.begin(), v.end());
            u.push_back(u_nu);
            return loglik(u);
        };
        const auto idx = static_cast<Eigen::Index>(k);
        const std::vector<double> u_sub(best.u.begin(), best.u.end() - 1);
        const std::vector<double> v_sub(values.begin(), values.end() - 1);
        const auto sub = hessian_standard_errors(reduced, u_sub, v_sub, Eigen::MatrixXd(jac.topLeftCorner(idx, idx)));
        if (sub.covariance) {
            conditional_on_nu = true;
            Eigen::MatrixXd cov = Eigen::MatrixXd::Constant(idx + 1, idx + 1, std::numeric_limits<double>::quiet_NaN());
            cov.topLeftCorner(idx, idx) = *sub.covariance;
            se.covariance = cov;
            for (std::size_t i = 0; i < k; ++i) {
                se.std_error[i] = sub.std_error[i];
                se.pvalues[i] = sub.pvalues[i];
            }
        }
    }
    result.covariance = se.covariance;
    for (std::size_t i = 0; i < values.size(); ++i) {
        Coefficient c;
        c.name = rep.names()[i];
        c.value = values[i];
        c.std_error = se.std_error[i];
        c.pvalue = se.pvalues[i];
        c.significance = significance_of(c.pvalue);
        result.coefficients.push_back(std::move(c));
    }

    if (!se.covariance) result.diagnostics.push_back("hessian not positive definite: standard errors absent");
    if (conditional_on_nu)
        result.diagnostics.push_back("likelihood flat in nu: standard errors are conditional on nu, none for nu");
    if (!best.stable) result.diagnostics.push_back("objective still improving after the last optimization cycle");
    if (result.gradient_norm >= kGradientTolerance) {
        std::ostringstream msg;
        msg << "gradient norm " << result.gradient_norm << " exceeds " << kGradientTolerance;
        result.diagnostics.push_back(msg.str());
    }
    if (config.family == ModelFamily::FIGARCH && !config.fixed_d &&
        (result.params.d < 1e-3 || result.params.d > 1.0 - 1e-3))
        result.diagnostics.push_back("d is within 1e-3 of the boundary of (0,1): boundary-suspect");
    if (result.params.nu && *result.params.nu > 100.0)
        result.diagnostics.push_back("nu > 100: innovations are near-Gaussian");
    return result;
}

// ---------------------------------------------------------------------------

PersistenceCheck persistence_check(double alpha, double beta, std::optional<double> se_sum) {
    PersistenceCheck pc;
    pc.sum = alpha + beta;
    pc.std_error = se_sum;
    // Strict inequality; the tolerance absorbs rounding in alpha + beta.
    pc.flagged = pc.sum > kPersistenceThreshold + 1e-12;
    if (pc.flagged) {
        std::ostringstream msg;
        msg << "exceeds " << kPersistenceThreshold << ", near-integrated: consider IGARCH or FIGARCH";
        pc.recommendation = msg.str();
    }
    return pc;
}

PersistenceCheck persistence_check(const FitResult& fit) {
    if (fit.family != ModelFamily::GARCH) throw DomainError("persistence check applies to GARCH fits");
    std::optional<double> se;
    if (fit.covariance) {
        Eigen::Index ia = -1, ib = -1;
        for (std::size_t i = 0; i < fit.coefficients.size(); ++i) {
            if (fit.coefficients[i].name == "alpha") ia = static_cast<Eigen::Index>(i);
            if (fit.coefficients[i].name == "beta") ib = static_cast<Eigen::Index>(i);
        }
        const auto& c = *fit.covariance;
        const double var = c(ia, ia) + c(ib, ib) + 2.0 * c(ia, ib);
        if (var > 0.0) se = std::sqrt(var);
    }
    return persistence_check(fit.params.alpha, fit.params.beta, se);
}

}  // namespace volclust
