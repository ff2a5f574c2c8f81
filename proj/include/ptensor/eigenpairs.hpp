#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "detail/optim.hpp"
#include "tensor.hpp"

namespace ptensor {

enum class EigKind { H, Z };

/// A verified real eigenpair. H-pairs are normalized to ||x||_inf = 1 (the
/// defining equation is scale-invariant), Z-pairs to ||x||_2 = 1 as the
/// definition requires. `heuristic` marks pairs from the multi-start Newton
/// path, whose completeness is empirical; scan (n <= 2) and analytic (n = 1)
/// results are certified up to scan resolution.
struct Eigenpair {
    EigKind kind;
    double lambda;
    Vector x;
    double residual;
    bool heuristic;
};

enum class EigMethod {
    automatic,  ///< scan for n <= 2, Newton for n >= 3
    scan,       ///< dense angular scan; n <= 2 only
    newton,     ///< multi-start Newton at any n (heuristic completeness)
};

struct EigConfig {
    double residual_tol = 1e-9;
    double dedup_tol = 1e-6;
    int starts = 200;
    int max_newton_iters = 100;
    std::uint64_t seed = 20240901;
    EigMethod method = EigMethod::automatic;
};

/// ||A x^{m-1} - lambda x^{[m-1]}||_inf, the defining-equation mismatch of an
/// H-pair. Independent of how the pair was produced.
inline double h_residual(const Tensor& a, double lambda, const Vector& x) {
    const Vector v = apply(a, x);
    double r = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double p = 1.0;
        for (int k = 0; k < a.order() - 1; ++k) p *= x[i];
        r = std::max(r, std::abs(v[i] - lambda * p));
    }
    return r;
}

/// ||A x^{m-1} - lambda x||_inf for a Z-pair (x expected unit 2-norm).
inline double z_residual(const Tensor& a, double lambda, const Vector& x) {
    const Vector v = apply(a, x);
    double r = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        r = std::max(r, std::abs(v[i] - lambda * x[i]));
    return r;
}

namespace detail {

inline void canonical_flip(Vector& x) {
    for (double v : x) {
        if (std::abs(v) > 1e-12) {
            if (v < 0.0)
                for (double& c : x) c = -c;
            return;
        }
    }
}

/// Normalize, recover lambda, verify: returns a pair only when the residual
/// clears the tolerance. x and -x solve the H-equation with the same lambda for
/// every m, so the sign is canonicalized unconditionally.
inline std::optional<Eigenpair> make_h_pair(const Tensor& a, Vector x, double residual_tol,
                                            bool heuristic) {
    const double nrm = inf_norm(x);
    if (nrm < 1e-8) return std::nullopt;
    for (double& v : x) v /= nrm;
    canonical_flip(x);
    std::size_t j = 0;
    for (std::size_t i = 1; i < x.size(); ++i)
        if (std::abs(x[i]) > std::abs(x[j])) j = i;
    const Vector v = apply(a, x);
    double pj = 1.0;
    for (int k = 0; k < a.order() - 1; ++k) pj *= x[j];
    const double lambda = v[j] / pj;
    if (!std::isfinite(lambda)) return std::nullopt;
    const double res = h_residual(a, lambda, x);
    if (!(res <= residual_tol)) return std::nullopt;
    return Eigenpair{EigKind::H, lambda, std::move(x), res, heuristic};
}

/// Z analog. For odd m, x and -x carry eigenvalues lambda and -lambda, so
/// the sign is canonicalized only when m is even.
inline std::optional<Eigenpair> make_z_pair(const Tensor& a, Vector x, double residual_tol,
                                            bool heuristic) {
    const double nrm = two_norm(x);
    if (nrm < 1e-8) return std::nullopt;
    for (double& v : x) v /= nrm;
    if (a.order() % 2 == 0) canonical_flip(x);
    const Vector v = apply(a, x);
    double lambda = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) lambda += x[i] * v[i];
    if (!std::isfinite(lambda)) return std::nullopt;
    const double res = z_residual(a, lambda, x);
    if (!(res <= residual_tol)) return std::nullopt;
    return Eigenpair{EigKind::Z, lambda, std::move(x), res, heuristic};
}

inline bool pairs_equal(const Eigenpair& p, const Eigenpair& q, double dedup_tol) {
    if (std::abs(p.lambda - q.lambda) > dedup_tol) return false;
    double dm = 0.0, dp = 0.0;
    for (std::size_t i = 0; i < p.x.size(); ++i) {
        dm = std::max(dm, std::abs(p.x[i] - q.x[i]));
        dp = std::max(dp, std::abs(p.x[i] + q.x[i]));
    }
    return std::min(dm, dp) <= 100.0 * dedup_tol;
}

/// Sort by (lambda, lexicographic x) and drop duplicates per the dedup rule.
/// The ordering makes the merged output independent of discovery order.
inline std::vector<Eigenpair> dedup_pairs(std::vector<Eigenpair> pairs, double dedup_tol) {
    std::sort(pairs.begin(), pairs.end(), [](const Eigenpair& p, const Eigenpair& q) {
        if (p.lambda != q.lambda) return p.lambda < q.lambda;
        return p.x < q.x;
    });
    std::vector<Eigenpair> out;
    for (auto& p : pairs) {
        bool dup = false;
        for (auto it = out.rbegin(); it != out.rend(); ++it) {
            if (p.lambda - it->lambda > dedup_tol) break;
            if (pairs_equal(p, *it, dedup_tol)) {
                dup = true;
                break;
            }
        }
        if (!dup) out.push_back(std::move(p));
    }
    return out;
}

// ---------------------------------------------------------------------------
// n = 1: both problems are scalar and closed-form.
// ---------------------------------------------------------------------------

inline std::vector<Eigenpair> analytic_1d(const Tensor& a, EigKind kind, const EigConfig& cfg) {
    const double d = a.entries()[0];
    std::vector<Eigenpair> out;
    if (kind == EigKind::H) {
        // a x^{m-1} = lambda x^{m-1} forces lambda = a for any nonzero x.
        if (auto p = make_h_pair(a, Vector{1.0}, cfg.residual_tol, false)) out.push_back(*p);
    } else {
        // a x^{m-1} = lambda x on x = +-1: lambda = a x^{m-2}, so odd m also
        // carries (-a, x = -1).
        if (auto p = make_z_pair(a, Vector{1.0}, cfg.residual_tol, false)) out.push_back(*p);
        if (a.order() % 2 != 0) {
            if (auto p = make_z_pair(a, Vector{-1.0}, cfg.residual_tol, false)) out.push_back(*p);
        }
    }
    return dedup_pairs(std::move(out), cfg.dedup_tol);
}

// ---------------------------------------------------------------------------
// n = 2: dense angular scan. Every eigenvector direction x(t) = (cos t, sin t)
// zeroes the cross function g(t); we bracket sign changes, pick up tangential
// roots from near-zero local minima, and verify every candidate's residual.
// ---------------------------------------------------------------------------

inline std::vector<Eigenpair> scan_2d(const Tensor& a, EigKind kind, const EigConfig& cfg) {
    const int m = a.order();
    const double pi = 3.14159265358979323846;
    // For the H-equation, -x is always an eigenvector with the same lambda (both
    // sides pick up (-1)^{m-1}), so half a turn covers all directions. The
    // same holds for the Z-equation only when m is even; odd m pairs lambda with
    // -lambda on the antipode, so the full turn is scanned.
    const double range = (kind == EigKind::H || m % 2 == 0) ? pi : 2.0 * pi;
    const int nodes = static_cast<int>(std::ceil(range / 1e-4));
    const double h = range / nodes;

    const auto cross = [&](double t) {
        const Vector x{std::cos(t), std::sin(t)};
        const Vector v = apply(a, x);
        if (kind == EigKind::H) {
            double p1 = 1.0, p2 = 1.0;
            for (int k = 0; k < m - 1; ++k) {
                p1 *= x[0];
                p2 *= x[1];
            }
            return v[0] * p2 - v[1] * p1;
        }
        return -x[1] * v[0] + x[0] * v[1];
    };
    const auto rayleigh = [&](double t) {
        const Vector x{std::cos(t), std::sin(t)};
        const Vector v = apply(a, x);
        return x[0] * v[0] + x[1] * v[1];
    };

    std::vector<double> g(static_cast<std::size_t>(nodes) + 1);
    double scale = 0.0;
    for (int k = 0; k <= nodes; ++k) {
        g[static_cast<std::size_t>(k)] = cross(k * h);
        scale = std::max(scale, std::abs(g[static_cast<std::size_t>(k)]));
    }

    std::vector<double> candidates;
    const Vector rows = row_abs_sums(a);
    const double tensor_scale = std::max(rows[0], rows[1]);
    if (scale <= 1e-12 * std::max(1.0, tensor_scale)) {
        // Degenerate case: g vanishes identically (e.g. unit matrix, zero
        // tensor, E-like tensors), so every direction solves the equation.
        // Canonical representatives plus the Rayleigh extremes cover both the
        // constant-lambda case and plateaus where lambda varies with angle.
        for (double t : {0.0, 0.25 * pi, 0.5 * pi, 0.75 * pi}) candidates.push_back(t);
        if (range > pi)
            for (double t : {pi, 1.25 * pi, 1.5 * pi, 1.75 * pi}) candidates.push_back(t);
        int kmin = 0, kmax = 0;
        double rmin = rayleigh(0.0), rmax = rmin;
        for (int k = 1; k <= nodes; ++k) {
            const double r = rayleigh(k * h);
            if (r < rmin) { rmin = r; kmin = k; }
            if (r > rmax) { rmax = r; kmax = k; }
        }
        candidates.push_back(kmin * h);
        candidates.push_back(kmax * h);
    } else {
        for (int k = 0; k < nodes; ++k) {
            const double gk = g[static_cast<std::size_t>(k)];
            const double gn = g[static_cast<std::size_t>(k) + 1];
            if (gk == 0.0) candidates.push_back(k * h);
            if (gk * gn < 0.0)
                candidates.push_back(detail::bisect_root(cross, k * h, (k + 1) * h));
        }
        if (g[static_cast<std::size_t>(nodes)] == 0.0) candidates.push_back(range);
        // Tangential roots never change sign; they show up as near-zero local
        // minima of |g| and are polished by golden-section before the residual
        // check decides.
        for (int k = 1; k < nodes; ++k) {
            const double cur = std::abs(g[static_cast<std::size_t>(k)]);
            if (cur > 1e-7 * scale) continue;
            if (cur <= std::abs(g[static_cast<std::size_t>(k) - 1]) &&
                cur <= std::abs(g[static_cast<std::size_t>(k) + 1])) {
                auto [t, gv] = detail::golden_min(
                    [&](double t2) { return std::abs(cross(t2)); }, (k - 1) * h, (k + 1) * h, 120);
                (void)gv;
                candidates.push_back(t);
            }
        }
    }

    std::vector<Eigenpair> out;
    for (double t : candidates) {
        Vector x{std::cos(t), std::sin(t)};
        auto p = (kind == EigKind::H) ? make_h_pair(a, std::move(x), cfg.residual_tol, false)
                                      : make_z_pair(a, std::move(x), cfg.residual_tol, false);
        if (p) out.push_back(std::move(*p));
    }
    return dedup_pairs(std::move(out), cfg.dedup_tol);
}

// ---------------------------------------------------------------------------
// General n: damped Newton on the square defining system from many starts.
// ---------------------------------------------------------------------------

/// Start points: coordinate axes, the all-ones direction, then seeded random
/// unit vectors. For m = 2 the dense matrix eigendecomposition supplies warm
/// starts, which makes the matrix case reliably complete; Newton still owns
/// verification.
inline std::vector<Vector> newton_starts(const Tensor& a, const EigConfig& cfg,
                                         std::mt19937_64& rng) {
    const int n = a.dim();
    std::vector<Vector> starts;
    for (int i = 0; i < n; ++i) {
        Vector e(static_cast<std::size_t>(n), 0.0);
        e[static_cast<std::size_t>(i)] = 1.0;
        starts.push_back(std::move(e));
    }
    starts.push_back(Vector(static_cast<std::size_t>(n), 1.0));
    if (a.order() == 2) {
        Eigen::MatrixXd mat(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                mat(i, j) = a.entries()[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                                        static_cast<std::size_t>(j)];
        Eigen::EigenSolver<Eigen::MatrixXd> es(mat);
        if (es.info() == Eigen::Success) {
            for (int k = 0; k < n; ++k) {
                if (std::abs(es.eigenvalues()[k].imag()) > 1e-10) continue;
                Vector x(static_cast<std::size_t>(n));
                for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = es.eigenvectors().col(k)[i].real();
                if (inf_norm(x) > 1e-10) starts.push_back(std::move(x));
            }
        }
    }
    std::normal_distribution<double> gauss(0.0, 1.0);
    while (static_cast<int>(starts.size()) < cfg.starts) {
        Vector x(static_cast<std::size_t>(n));
        for (double& v : x) v = gauss(rng);
        if (inf_norm(x) > 1e-10) starts.push_back(std::move(x));
    }
    return starts;
}

inline std::optional<Eigenpair> newton_h_from(const Tensor& a, Vector x, const EigConfig& cfg) {
    const int n = a.dim();
    const int m = a.order();
    double nrm = inf_norm(x);
    if (nrm < 1e-10) return std::nullopt;
    for (double& v : x) v /= nrm;

    // Least-squares initial lambda for the current direction.
    auto estimate_lambda = [&](const Vector& xx, const Vector& v) {
        double num = 0.0, den = 0.0;
        for (int i = 0; i < n; ++i) {
            double p = 1.0;
            for (int k = 0; k < m - 1; ++k) p *= xx[static_cast<std::size_t>(i)];
            num += v[static_cast<std::size_t>(i)] * p;
            den += p * p;
        }
        return den > 0.0 ? num / den : 0.0;
    };
    Vector v = apply(a, x);
    double lambda = estimate_lambda(x, v);

    auto fnorm = [&](const Vector& xx, double lam) {
        return h_residual(a, lam, xx);
    };
    double res = fnorm(x, lambda);
    int active = 0;
    for (int i = 1; i < n; ++i)
        if (std::abs(x[static_cast<std::size_t>(i)]) > std::abs(x[static_cast<std::size_t>(active)])) active = i;
    bool switched = false;

    for (int it = 0; it < cfg.max_newton_iters && res > 0.25 * cfg.residual_tol; ++it) {
        v = apply(a, x);
        const std::vector<double> ja = apply_jacobian(a, x);
        // System in the n unknowns {x_k : k != active} and lambda, with the
        // active coordinate frozen at +-1 to pin the scale.
        std::vector<double> mat(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
        std::vector<double> rhs(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            double pim1 = 1.0, pim2 = 1.0;
            for (int k = 0; k < m - 2; ++k) pim2 *= x[static_cast<std::size_t>(i)];
            pim1 = pim2 * x[static_cast<std::size_t>(i)];
            rhs[static_cast<std::size_t>(i)] = -(v[static_cast<std::size_t>(i)] - lambda * pim1);
            int col = 0;
            for (int k = 0; k < n; ++k) {
                if (k == active) continue;
                double d = ja[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(k)];
                if (k == i) d -= lambda * (m - 1) * pim2;
                mat[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(col)] = d;
                ++col;
            }
            mat[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(n) - 1] = -pim1;
        }
        std::vector<double> step;
        if (!detail::solve_linear(n, mat, rhs, step)) break;

        double t = 1.0;
        bool accepted = false;
        while (t >= std::ldexp(1.0, -20)) {
            Vector xt = x;
            int col = 0;
            for (int k = 0; k < n; ++k) {
                if (k == active) continue;
                xt[static_cast<std::size_t>(k)] += t * step[static_cast<std::size_t>(col)];
                ++col;
            }
            const double lt = lambda + t * step[static_cast<std::size_t>(n) - 1];
            const double rt = fnorm(xt, lt);
            if (rt < res) {
                x = std::move(xt);
                lambda = lt;
                res = rt;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            // Stagnation: re-pin the normalization at the current largest
            // coordinate once, then give up on this start.
            int largest = 0;
            for (int i = 1; i < n; ++i)
                if (std::abs(x[static_cast<std::size_t>(i)]) > std::abs(x[static_cast<std::size_t>(largest)])) largest = i;
            if (!switched && largest != active) {
                active = largest;
                switched = true;
                continue;
            }
            break;
        }
        const double mx = inf_norm(x);
        if (mx < 1e-10 || !std::isfinite(mx)) break;
        for (double& c : x) c /= mx;
        int largest = 0;
        for (int i = 1; i < n; ++i)
            if (std::abs(x[static_cast<std::size_t>(i)]) > std::abs(x[static_cast<std::size_t>(largest)])) largest = i;
        active = largest;
        res = fnorm(x, lambda);
    }
    if (res > cfg.residual_tol) return std::nullopt;
    return make_h_pair(a, std::move(x), cfg.residual_tol, a.dim() >= 3);
}

inline std::optional<Eigenpair> newton_z_from(const Tensor& a, Vector x, const EigConfig& cfg) {
    const int n = a.dim();
    double nrm = two_norm(x);
    if (nrm < 1e-10) return std::nullopt;
    for (double& v : x) v /= nrm;
    Vector v = apply(a, x);
    double lambda = 0.0;
    for (int i = 0; i < n; ++i) lambda += x[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];

    // Augmented system: n defining equations plus the sphere constraint.
    auto fnorm = [&](const Vector& xx, double lam) {
        const Vector vv = apply(a, xx);
        double r = 0.0;
        for (int i = 0; i < n; ++i)
            r = std::max(r, std::abs(vv[static_cast<std::size_t>(i)] - lam * xx[static_cast<std::size_t>(i)]));
        double s = -1.0;
        for (int i = 0; i < n; ++i) s += xx[static_cast<std::size_t>(i)] * xx[static_cast<std::size_t>(i)];
        return std::max(r, std::abs(s));
    };
    double res = fnorm(x, lambda);

    const int dim = n + 1;
    for (int it = 0; it < cfg.max_newton_iters && res > 0.25 * cfg.residual_tol; ++it) {
        v = apply(a, x);
        const std::vector<double> ja = apply_jacobian(a, x);
        std::vector<double> mat(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim), 0.0);
        std::vector<double> rhs(static_cast<std::size_t>(dim));
        for (int i = 0; i < n; ++i) {
            for (int k = 0; k < n; ++k) {
                double d = ja[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(k)];
                if (k == i) d -= lambda;
                mat[static_cast<std::size_t>(i) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(k)] = d;
            }
            mat[static_cast<std::size_t>(i) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(n)] =
                -x[static_cast<std::size_t>(i)];
            rhs[static_cast<std::size_t>(i)] = -(v[static_cast<std::size_t>(i)] - lambda * x[static_cast<std::size_t>(i)]);
        }
        double s = -1.0;
        for (int i = 0; i < n; ++i) {
            mat[static_cast<std::size_t>(n) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(i)] =
                2.0 * x[static_cast<std::size_t>(i)];
            s += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
        }
        rhs[static_cast<std::size_t>(n)] = -s;
        std::vector<double> step;
        if (!detail::solve_linear(dim, mat, rhs, step)) break;

        double t = 1.0;
        bool accepted = false;
        while (t >= std::ldexp(1.0, -20)) {
            Vector xt = x;
            for (int i = 0; i < n; ++i) xt[static_cast<std::size_t>(i)] += t * step[static_cast<std::size_t>(i)];
            const double lt = lambda + t * step[static_cast<std::size_t>(n)];
            const double rt = fnorm(xt, lt);
            if (rt < res) {
                x = std::move(xt);
                lambda = lt;
                res = rt;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break;
    }
    if (res > cfg.residual_tol) return std::nullopt;
    return make_z_pair(a, std::move(x), cfg.residual_tol, a.dim() >= 3);
}

inline std::vector<Eigenpair> newton_all(const Tensor& a, EigKind kind, const EigConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);
    std::vector<Eigenpair> out;
    for (Vector& s : newton_starts(a, cfg, rng)) {
        auto p = (kind == EigKind::H) ? newton_h_from(a, std::move(s), cfg)
                                      : newton_z_from(a, std::move(s), cfg);
        if (p) out.push_back(std::move(*p));
    }
    return dedup_pairs(std::move(out), cfg.dedup_tol);
}

inline std::vector<Eigenpair> eigenpairs(const Tensor& a, EigKind kind, const EigConfig& cfg) {
    if (!(cfg.residual_tol > 0.0) || !(cfg.dedup_tol > 0.0) || cfg.starts < 1)
        throw InputError("eigensolver config: tolerances must be positive, starts >= 1");
    if (a.dim() == 1) return analytic_1d(a, kind, cfg);
    switch (cfg.method) {
        case EigMethod::scan:
            if (a.dim() > 2) throw InputError("scan eigensolver supports n <= 2");
            return scan_2d(a, kind, cfg);
        case EigMethod::newton:
            return newton_all(a, kind, cfg);
        case EigMethod::automatic:
            return a.dim() <= 2 ? scan_2d(a, kind, cfg) : newton_all(a, kind, cfg);
    }
    throw InputError("unknown eigensolver method");
}

}  // namespace detail

/// All real H-eigenpairs found for A, deduplicated and
/// sorted by (lambda, lexicographic x). An empty result is legal: eigenvalues
/// need not exist, and the delta constants skip such sub-tensors.
inline std::vector<Eigenpair> h_eigenpairs(const Tensor& a, const EigConfig& cfg = {}) {
    return detail::eigenpairs(a, EigKind::H, cfg);
}

/// All real Z-eigenpairs found for A, unit 2-norm vectors.
inline std::vector<Eigenpair> z_eigenpairs(const Tensor& a, const EigConfig& cfg = {}) {
    return detail::eigenpairs(a, EigKind::Z, cfg);
}

inline std::optional<Eigenpair> smallest_h_pair(const Tensor& a, const EigConfig& cfg = {}) {
    auto pairs = h_eigenpairs(a, cfg);
    if (pairs.empty()) return std::nullopt;
    return pairs.front();
}

inline std::optional<Eigenpair> smallest_z_pair(const Tensor& a, const EigConfig& cfg = {}) {
    auto pairs = z_eigenpairs(a, cfg);
    if (pairs.empty()) return std::nullopt;
    return pairs.front();
}

inline std::optional<double> smallest_h(const Tensor& a, const EigConfig& cfg = {}) {
    auto p = smallest_h_pair(a, cfg);
    if (!p) return std::nullopt;
    return p->lambda;
}

inline std::optional<double> smallest_z(const Tensor& a, const EigConfig& cfg = {}) {
    auto p = smallest_z_pair(a, cfg);
    if (!p) return std::nullopt;
    return p->lambda;
}

}  // namespace ptensor
