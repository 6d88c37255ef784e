#include "volclust/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace volclust::optim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Maps NaN to +inf so comparisons order infeasible points last.
double eval(const Objective& f, std::span<const double> x, int& count) {
    ++count;
    const double v = f(x);
    return std::isnan(v) ? kInf : v;
}

double eval(const Objective& f, const Eigen::VectorXd& x, int& count) {
    return eval(f, std::span<const double>(x.data(), static_cast<std::size_t>(x.size())), count);
}

Eigen::VectorXd to_eigen(std::span<const double> x) {
    return Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
}

std::vector<double> to_std(const Eigen::VectorXd& x) { return {x.data(), x.data() + x.size()}; }

Eigen::VectorXd gradient_counted(const Objective& f, const Eigen::VectorXd& x, int& count) {
    const auto n = x.size();
    Eigen::VectorXd g(n);
    Eigen::VectorXd xp = x;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double h = 1e-5 * std::max(1.0, std::abs(x[i]));
        xp[i] = x[i] + h;
        const double fp = eval(f, xp, count);
        xp[i] = x[i] - h;
        const double fm = eval(f, xp, count);
        xp[i] = x[i];
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

}  // namespace

Result nelder_mead(const Objective& f, std::span<const double> x0, const NelderMeadOptions& opts) {
    const std::size_t n = x0.size();
    Result res;
    std::vector<Eigen::VectorXd> simplex(n + 1, to_eigen(x0));
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double step = opts.initial_step * std::max(1.0, std::abs(x0[i]));
        simplex[i + 1][static_cast<Eigen::Index>(i)] += step;
    }
    for (std::size_t i = 0; i <= n; ++i) fv[i] = eval(f, simplex[i], res.evaluations);

    std::vector<std::size_t> order(n + 1);
    for (int it = 0; it < opts.max_iterations; ++it) {
        res.iterations = it + 1;
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return fv[a] < fv[b]; });
        const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];

        double spread = std::abs(fv[worst] - fv[best]);
        double size = 0.0;
        for (std::size_t i = 0; i <= n; ++i)
            size = std::max(size, (simplex[i] - simplex[best]).lpNorm<Eigen::Infinity>());
        if (std::isfinite(fv[best]) && spread <= opts.ftol && size <= opts.xtol) {
            res.converged = true;
            break;
        }

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i <= n; ++i)
            if (i != worst) centroid += simplex[i];
        centroid /= static_cast<double>(n);

        const Eigen::VectorXd xr = centroid + (centroid - simplex[worst]);
        const double fr = eval(f, xr, res.evaluations);
        if (fr < fv[best]) {
            const Eigen::VectorXd xe = centroid + 2.0 * (centroid - simplex[worst]);
            const double fe = eval(f, xe, res.evaluations);
            if (fe < fr) {
                simplex[worst] = xe;
                fv[worst] = fe;
            } else {
                simplex[worst] = xr;
                fv[worst] = fr;
            }
            continue;
        }
        if (fr < fv[second]) {
            simplex[worst] = xr;
            fv[worst] = fr;
            continue;
        }
        // Contraction: outside when the reflected point beats the worst vertex.
        const bool outside = fr < fv[worst];
        const Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + 0.5 * (xr - centroid))
                                           : Eigen::VectorXd(centroid + 0.5 * (simplex[worst] - centroid));
        const double fc = eval(f, xc, res.evaluations);
        if (fc < (outside ? fr : fv[worst])) {
            simplex[worst] = xc;
            fv[worst] = fc;
            continue;
        }
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == best) continue;
            simplex[i] = simplex[best] + 0.5 * (simplex[i] - simplex[best]);
            fv[i] = eval(f, simplex[i], res.evaluations);
        }
    }
    const auto best = static_cast<std::size_t>(std::min_element(fv.begin(), fv.end()) - fv.begin());
    res.x = to_std(simplex[best]);
    res.f = fv[best];
    return res;
}

Result bfgs(const Objective& f, std::span<const double> x0, const QuasiNewtonOptions& opts) {
    Result res;
    const auto n = static_cast<Eigen::Index>(x0.size());
    Eigen::VectorXd x = to_eigen(x0);
    double fx = eval(f, x, res.evaluations);
    res.x = to_std(x);
    res.f = fx;
    if (!std::isfinite(fx)) return res;

    Eigen::VectorXd g = gradient_counted(f, x, res.evaluations);
    Eigen::MatrixXd Hinv = Eigen::MatrixXd::Identity(n, n);
    bool scaled = false;

    for (int it = 0; it < opts.max_iterations; ++it) {
        res.iterations = it + 1;
        if (!g.allFinite()) break;
        if (g.lpNorm<Eigen::Infinity>() < opts.gtol) {
            res.converged = true;
            break;
        }
        Eigen::VectorXd p = -Hinv * g;
        if (g.dot(p) >= 0.0) {
            Hinv.setIdentity();
            scaled = false;
            p = -g;
        }
        // Cap the first unscaled step so an identity metric on a steep objective
        // does not jump far outside the feasible region.
        if (!scaled) {
            const double norm = p.norm();
            if (norm > 1.0) p /= norm;
        }

        double step = 1.0;
        double fnew = kInf;
        Eigen::VectorXd xnew;
        const double slope = g.dot(p);
        for (int ls = 0; ls < 60; ++ls) {
            xnew = x + step * p;
            fnew = eval(f, xnew, res.evaluations);
            if (std::isfinite(fnew) && fnew <= fx + 1e-4 * step * slope) break;
            step *= 0.5;
        }
        if (!std::isfinite(fnew) || fnew > fx) break;

        const Eigen::VectorXd gnew = gradient_counted(f, xnew, res.evaluations);
        const Eigen::VectorXd s = xnew - x;
        const Eigen::VectorXd y = gnew - g;
        const double fprev = fx;
        x = xnew;
        fx = fnew;
        g = gnew;

        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            if (!scaled) {
                Hinv *= sy / y.squaredNorm();
                scaled = true;
            }
            const double rho = 1.0 / sy;
            const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
            Hinv = (I - rho * s * y.transpose()) * Hinv * (I - rho * y * s.transpose()) +
                   rho * s * s.transpose();
        }
        if (std::abs(fprev - fx) <= opts.ftol * std::max(1.0, std::abs(fx))) {
            res.converged = g.lpNorm<Eigen::Infinity>() < opts.gtol;
            break;
        }
    }
    res.x = to_std(x);
    res.f = fx;
    return res;
}

Result newton_polish(const Objective& f, std::span<const double> x0, int max_steps, double gtol) {
    Result res;
    Eigen::VectorXd x = to_eigen(x0);
    double fx = eval(f, x, res.evaluations);
    for (int it = 0; it < max_steps && std::isfinite(fx); ++it) {
        const Eigen::VectorXd g = gradient_counted(f, x, res.evaluations);
        if (!g.allFinite()) break;
        if (g.lpNorm<Eigen::Infinity>() < gtol) {
            res.converged = true;
            break;
        }
        const auto xs = to_std(x);
        const Eigen::MatrixXd H = hessian(f, xs);
        res.evaluations += static_cast<int>(2 * x.size() * x.size() + 1);
        if (!H.allFinite()) break;
        Eigen::LLT<Eigen::MatrixXd> llt(H);
        if (llt.info() != Eigen::Success) break;
        const Eigen::VectorXd p = llt.solve(-g);
        double step = 1.0;
        bool moved = false;
        for (int ls = 0; ls < 30; ++ls) {
            const Eigen::VectorXd xn = x + step * p;
            const double fn = eval(f, xn, res.evaluations);
            if (std::isfinite(fn) && fn <= fx) {
                x = xn;
                fx = fn;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        res.iterations = it + 1;
        if (!moved) break;
    }
    res.x = to_std(x);
    res.f = fx;
    return res;
}

Eigen::VectorXd gradient(const Objective& f, std::span<const double> x) {
    int count = 0;
    return gradient_counted(f, to_eigen(x), count);
}

Eigen::MatrixXd hessian(const Objective& f, std::span<const double> x) {
    const auto n = static_cast<Eigen::Index>(x.size());
    Eigen::VectorXd h(n);
    for (Eigen::Index i = 0; i < n; ++i) h[i] = std::max(1e-5, 1e-4 * std::abs(x[static_cast<std::size_t>(i)]));

    Eigen::VectorXd xv = to_eigen(x);
    int count = 0;
    auto at = [&](Eigen::Index i, double di, Eigen::Index j, double dj) {
        Eigen::VectorXd y = xv;
        y[i] += di;
        y[j] += dj;
        return eval(f, y, count);
    };
    const double f0 = eval(f, xv, count);
    Eigen::MatrixXd H(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double fp = at(i, h[i], i, 0.0);
        const double fm = at(i, -h[i], i, 0.0);
        H(i, i) = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
        for (Eigen::Index j = 0; j < i; ++j) {
            const double fpp = at(i, h[i], j, h[j]);
            const double fpm = at(i, h[i], j, -h[j]);
            const double fmp = at(i, -h[i], j, h[j]);
            const double fmm = at(i, -h[i], j, -h[j]);
            H(i, j) = H(j, i) = (fpp - fpm - fmp + fmm) / (4.0 * h[i] * h[j]);
        }
    }
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (!std::isfinite(H(i, j))) H(i, j) = std::numeric_limits<double>::quiet_NaN();
    return H;
}

std::optional<Eigen::MatrixXd> inverse_if_positive_definite(const Eigen::MatrixXd& m) {
    if (!m.allFinite()) return std::nullopt;
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) return std::nullopt;
    const Eigen::VectorXd diag = llt.matrixL().toDenseMatrix().diagonal();
    // Reject numerically singular factors.
    if (diag.minCoeff() <= 1e-12 * std::max(1.0, diag.maxCoeff())) return std::nullopt;
    return llt.solve(Eigen::MatrixXd::Identity(m.rows(), m.cols()));
}

}  // namespace volclust::optim
