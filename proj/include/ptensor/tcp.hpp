#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "detail/optim.hpp"
#include "tensor.hpp"

namespace ptensor {

/// TCP(A, q): find x >= 0 with w = q + A x^{m-1} >= 0 and x^T w = 0.
struct TcpInstance {
    Tensor a;
    Vector q;

    TcpInstance(Tensor a_, Vector q_) : a(std::move(a_)), q(std::move(q_)) {
        if (static_cast<int>(q.size()) != a.dim())
            throw InputError("TCP right-hand side length does not match tensor dimension");
    }
};

struct TcpConfig {
    double tol = 1e-10;
    int max_iters = 200;        ///< Newton iterations per start
    double backtrack = 0.5;     ///< line-search shrink factor
    double min_step = std::ldexp(1.0, -20);
    int starts = 20;
    std::uint64_t seed = 424242;
};

/// `converged` implies residual <= tol; since the residual dominates every
/// componentwise min(x_i, w_i), it also implies x >= -tol and w >= -tol.
struct TcpSolution {
    Vector x;
    Vector w;
    double residual;
    int iterations;  ///< Newton iterations summed over all starts tried
    bool converged;
};

/// Natural-map residual ||min(x, q + A x^{m-1})||_inf: zero exactly at TCP
/// solutions, and the solver-independent acceptance metric.
inline double tcp_residual(const TcpInstance& inst, const Vector& x) {
    if (x.size() != inst.q.size())
        throw InputError("vector length does not match TCP dimension");
    const Vector v = apply(inst.a, x);
    double r = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        r = std::max(r, std::abs(std::min(x[i], inst.q[i] + v[i])));
    return r;
}

namespace detail {

/// One damped semismooth Newton run on phi(x) = min(x, w(x)). Each row of
/// the generalized Jacobian is either an identity row (x-active) or the
/// corresponding row of the Jacobian of w. Returns (x, residual, iterations).
inline std::pair<Vector, double> tcp_newton(const TcpInstance& inst, Vector x,
                                            const TcpConfig& cfg, int& iterations) {
    const int n = inst.a.dim();
    const int m = inst.a.order();
    (void)m;
    auto phi_norm = [&](const Vector& xx) { return tcp_residual(inst, xx); };
    double res = phi_norm(x);

    for (int it = 0; it < cfg.max_iters && res > cfg.tol; ++it) {
        ++iterations;
        const Vector v = apply(inst.a, x);
        const std::vector<double> jw = apply_jacobian(inst.a, x);
        std::vector<double> mat(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
        std::vector<double> rhs(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            const double wi = inst.q[static_cast<std::size_t>(i)] + v[static_cast<std::size_t>(i)];
            const double xi = x[static_cast<std::size_t>(i)];
            rhs[static_cast<std::size_t>(i)] = -std::min(xi, wi);
            if (xi <= wi) {
                mat[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)] = 1.0;
            } else {
                for (int k = 0; k < n; ++k)
                    mat[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(k)] =
                        jw[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(k)];
            }
        }
        std::vector<double> step;
        if (!detail::solve_linear(n, mat, rhs, step)) break;

        double t = 1.0;
        bool accepted = false;
        while (t >= cfg.min_step) {
            Vector xt = x;
            for (int i = 0; i < n; ++i) xt[static_cast<std::size_t>(i)] += t * step[static_cast<std::size_t>(i)];
            const double rt = phi_norm(xt);
            if (rt < (1.0 - 1e-4 * t) * res) {
                x = std::move(xt);
                res = rt;
                accepted = true;
                break;
            }
            t *= cfg.backtrack;
        }
        if (!accepted) break;  // stagnation: caller moves to the next start
    }
    return {std::move(x), res};
}

}  // namespace detail

/// Damped semismooth Newton on the natural map, with a deterministic start
/// ladder: zero, a componentwise warm start from the negative part of q
/// (exact for diagonal tensors), then seeded random nonnegative points.
/// First converged start wins; otherwise the best residual seen is returned
/// with converged = false.
inline TcpSolution solve_tcp(const TcpInstance& inst, const TcpConfig& cfg = {}) {
    if (!(cfg.tol > 0.0)) throw InputError("tcp config: tol must be positive");
    const int n = inst.a.dim();
    const int m = inst.a.order();

    std::vector<Vector> starts;
    starts.push_back(Vector(static_cast<std::size_t>(n), 0.0));
    {
        // If A were the unit tensor the solution would be x_i = (-q_i)_+^{1/(m-1)};
        // that point is an excellent basin for diagonally-dominated instances.
        Vector warm(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            warm[static_cast<std::size_t>(i)] = std::max(-inst.q[static_cast<std::size_t>(i)], 0.0);
        starts.push_back(power_vector(warm, 1.0 / (m - 1)));
    }
    double qscale = 1.0;
    for (double v : inst.q) qscale = std::max(qscale, std::abs(v));
    const double xscale = std::pow(qscale, 1.0 / (m - 1));
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    while (static_cast<int>(starts.size()) < std::max(cfg.starts, 2)) {
        Vector x(static_cast<std::size_t>(n));
        for (double& v : x) v = xscale * u(rng);
        starts.push_back(std::move(x));
    }

    int iterations = 0;
    Vector best_x(static_cast<std::size_t>(n), 0.0);
    double best_res = tcp_residual(inst, best_x);
    for (Vector& s : starts) {
        auto [x, res] = detail::tcp_newton(inst, std::move(s), cfg, iterations);
        if (res < best_res) {
            best_res = res;
            best_x = std::move(x);
        }
        if (best_res <= cfg.tol) break;
    }

    TcpSolution sol;
    sol.x = std::move(best_x);
    const Vector v = apply(inst.a, sol.x);
    sol.w.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        sol.w[static_cast<std::size_t>(i)] = inst.q[static_cast<std::size_t>(i)] + v[static_cast<std::size_t>(i)];
    sol.residual = tcp_residual(inst, sol.x);
    sol.iterations = iterations;
    sol.converged = sol.residual <= cfg.tol;
    return sol;
}

}  // namespace ptensor
