#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace ptensor::detail {

/// Solve the dense n x n system A s = b (A row-major). Returns false when A
/// is numerically singular or the solution is non-finite.
inline bool solve_linear(int n, const std::vector<double>& a, const std::vector<double>& b,
                         std::vector<double>& out) {
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<const RowMajor> mat(a.data(), n, n);
    Eigen::Map<const Eigen::VectorXd> rhs(b.data(), n);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(mat);
    if (!lu.isInvertible()) return false;
    Eigen::VectorXd s = lu.solve(rhs);
    out.assign(s.data(), s.data() + n);
    for (double v : out)
        if (!std::isfinite(v)) return false;
    return true;
}

/// Golden-section minimization of f over [a, b]. Unimodality is the caller's
/// concern; the bracket shrinks deterministically either way.
template <typename F>
std::pair<double, double> golden_min(F&& f, double a, double b, int iters) {
    constexpr double inv_phi = 0.6180339887498949;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int k = 0; k < iters; ++k) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc < fd ? std::make_pair(c, fc) : std::make_pair(d, fd);
}

/// Bisection on a bracketed sign change of g. Requires g(a) and g(b) of
/// opposite (nonzero) sign; returns the midpoint of the final bracket.
template <typename F>
double bisect_root(F&& g, double a, double b, int iters = 80) {
    double ga = g(a);
    for (int k = 0; k < iters; ++k) {
        const double mid = 0.5 * (a + b);
        const double gm = g(mid);
        if (gm == 0.0) return mid;
        if ((ga < 0.0) != (gm < 0.0)) {
            b = mid;
        } else {
            a = mid;
            ga = gm;
        }
    }
    return 0.5 * (a + b);
}

/// Derivative-free Nelder-Mead minimization over R^d starting from x0.
/// Standard coefficients (reflect 1, expand 2, contract 1/2, shrink 1/2),
/// deterministic given the start and step. Returns the best vertex.
template <typename F>
std::pair<std::vector<double>, double> nelder_mead(F&& f, std::vector<double> x0, double step,
                                                   int iters, double ftol = 1e-13) {
    const std::size_t d = x0.size();
    if (d == 0) return {std::move(x0), f(x0)};
    std::vector<std::vector<double>> simplex(d + 1, x0);
    std::vector<double> fv(d + 1);
    for (std::size_t k = 0; k < d; ++k) simplex[k + 1][k] += step;
    for (std::size_t k = 0; k <= d; ++k) fv[k] = f(simplex[k]);

    std::vector<std::size_t> ord(d + 1);
    for (int it = 0; it < iters; ++it) {
        for (std::size_t k = 0; k <= d; ++k) ord[k] = k;
        std::sort(ord.begin(), ord.end(), [&](std::size_t i, std::size_t j) {
            return fv[i] < fv[j] || (fv[i] == fv[j] && i < j);
        });
        const std::size_t best = ord[0], worst = ord[d], second = ord[d - 1];
        if (std::abs(fv[worst] - fv[best]) <= ftol * (std::abs(fv[best]) + ftol)) break;

        std::vector<double> centroid(d, 0.0);
        for (std::size_t k = 0; k <= d; ++k) {
            if (k == worst) continue;
            for (std::size_t j = 0; j < d; ++j) centroid[j] += simplex[k][j];
        }
        for (double& c : centroid) c /= static_cast<double>(d);

        auto blend = [&](double t) {
            std::vector<double> p(d);
            for (std::size_t j = 0; j < d; ++j)
                p[j] = centroid[j] + t * (centroid[j] - simplex[worst][j]);
            return p;
        };

        std::vector<double> refl = blend(1.0);
        const double fr = f(refl);
        if (fr < fv[best]) {
            std::vector<double> expd = blend(2.0);
            const double fe = f(expd);
            if (fe < fr) {
                simplex[worst] = std::move(expd);
                fv[worst] = fe;
            } else {
                simplex[worst] = std::move(refl);
                fv[worst] = fr;
            }
        } else if (fr < fv[second]) {
            simplex[worst] = std::move(refl);
            fv[worst] = fr;
        } else {
            const bool outside = fr < fv[worst];
            std::vector<double> ctr = blend(outside ? 0.5 : -0.5);
            const double fc = f(ctr);
            if (fc < (outside ? fr : fv[worst])) {
                simplex[worst] = std::move(ctr);
                fv[worst] = fc;
            } else {
                for (std::size_t k = 0; k <= d; ++k) {
                    if (k == best) continue;
                    for (std::size_t j = 0; j < d; ++j)
                        simplex[k][j] = simplex[best][j] + 0.5 * (simplex[k][j] - simplex[best][j]);
                    fv[k] = f(simplex[k]);
                }
            }
        }
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k <= d; ++k)
        if (fv[k] < fv[best]) best = k;
    return {simplex[best], fv[best]};
}

}  // namespace ptensor::detail
