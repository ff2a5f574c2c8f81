#pragma once

// Test-side oracles, written independently of the library's algorithms so
// agreement actually means something: naive multilinear evaluation, dense
// matrix eigendecomposition, a plain face-grid alpha scan with no refinement
// or symmetry shortcuts, LCP active-set enumeration, and a materialized E
// tensor for m = 4.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "ptensor/tensor.hpp"

namespace testsup {

using ptensor::Tensor;
using ptensor::Vector;

/// Direct sum over all (m-1)-tuples, no contraction tricks.
inline Vector naive_apply(const Tensor& a, const Vector& x) {
    const int n = a.dim();
    const int m = a.order();
    Vector out(static_cast<std::size_t>(n), 0.0);
    std::vector<int> tup(static_cast<std::size_t>(m - 1), 0);
    bool more = true;
    while (more) {
        double prod = 1.0;
        for (int k : tup) prod *= x[static_cast<std::size_t>(k)];
        std::size_t off = 0;
        for (int k : tup) off = off * static_cast<std::size_t>(n) + static_cast<std::size_t>(k);
        const std::size_t row = a.size() / static_cast<std::size_t>(n);
        for (int i = 0; i < n; ++i)
            out[static_cast<std::size_t>(i)] += a.entries()[static_cast<std::size_t>(i) * row + off] * prod;
        // advance
        more = false;
        for (int k = m - 2; k >= 0; --k) {
            if (++tup[static_cast<std::size_t>(k)] < n) {
                more = true;
                break;
            }
            tup[static_cast<std::size_t>(k)] = 0;
        }
    }
    return out;
}

/// Real eigenvalues of an n x n matrix (row-major), sorted ascending.
inline std::vector<double> matrix_real_eigenvalues(const std::vector<double>& mat, int n) {
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a(i, j) = mat[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                          static_cast<std::size_t>(j)];
    Eigen::EigenSolver<Eigen::MatrixXd> es(a);
    std::vector<double> out;
    for (int k = 0; k < n; ++k)
        if (std::abs(es.eigenvalues()[k].imag()) <= 1e-10) out.push_back(es.eigenvalues()[k].real());
    std::sort(out.begin(), out.end());
    return out;
}

/// Plain grid minimum of max_i x_i (op(x))_i over ALL 2n faces of the
/// infinity-sphere (no symmetry halving, no refinement). `op` maps x to the
/// operator value.
template <typename Op>
inline double brute_alpha(int n, double h, const Op& op) {
    int steps = static_cast<int>(std::lround(2.0 / h));
    if (steps < 2) steps = 2;
    const double he = 2.0 / steps;
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
        for (double s : {1.0, -1.0}) {
            std::vector<int> tup(static_cast<std::size_t>(n - 1), 0);
            bool more = true;
            while (more) {
                Vector x(static_cast<std::size_t>(n));
                int c = 0;
                for (int k = 0; k < n; ++k) {
                    if (k == j) {
                        x[static_cast<std::size_t>(k)] = s;
                    } else {
                        x[static_cast<std::size_t>(k)] = -1.0 + he * tup[static_cast<std::size_t>(c)];
                        ++c;
                    }
                }
                const Vector v = op(x);
                double g = x[0] * v[0];
                for (std::size_t i = 1; i < x.size(); ++i) g = std::max(g, x[i] * v[i]);
                best = std::min(best, g);
                more = false;
                for (int k = static_cast<int>(tup.size()) - 1; k >= 0; --k) {
                    if (++tup[static_cast<std::size_t>(k)] <= steps) {
                        more = true;
                        break;
                    }
                    tup[static_cast<std::size_t>(k)] = 0;
                }
                if (tup.empty()) more = false;
            }
        }
    }
    return best;
}

/// Unique LCP solution by enumerating the 2^n complementarity bases:
/// for active set S solve M_SS x_S = -q_S, x zero elsewhere, then check
/// x >= -tol and q + Mx >= -tol. Valid oracle for P-matrices (unique
/// solution); returns the first feasible basis found.
inline std::optional<Vector> lcp_active_set(const std::vector<double>& mat, const Vector& q,
                                            double tol = 1e-10) {
    const int n = static_cast<int>(q.size());
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        std::vector<int> active;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) active.push_back(i);
        const int r = static_cast<int>(active.size());
        Vector x(static_cast<std::size_t>(n), 0.0);
        if (r > 0) {
            Eigen::MatrixXd sub(r, r);
            Eigen::VectorXd rhs(r);
            for (int a = 0; a < r; ++a) {
                rhs(a) = -q[static_cast<std::size_t>(active[static_cast<std::size_t>(a)])];
                for (int b = 0; b < r; ++b)
                    sub(a, b) = mat[static_cast<std::size_t>(active[static_cast<std::size_t>(a)]) *
                                        static_cast<std::size_t>(n) +
                                    static_cast<std::size_t>(active[static_cast<std::size_t>(b)])];
            }
            Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
            if (!lu.isInvertible()) continue;
            Eigen::VectorXd xs = lu.solve(rhs);
            bool ok = true;
            for (int a = 0; a < r; ++a) {
                if (!(xs(a) >= -tol)) ok = false;
                x[static_cast<std::size_t>(active[static_cast<std::size_t>(a)])] = xs(a);
            }
            if (!ok) continue;
        }
        // feasibility of w = q + Mx on the inactive part
        bool ok = true;
        for (int i = 0; i < n; ++i) {
            double w = q[static_cast<std::size_t>(i)];
            for (int k = 0; k < n; ++k)
                w += mat[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                         static_cast<std::size_t>(k)] *
                     x[static_cast<std::size_t>(k)];
            if (!(w >= -tol)) {
                ok = false;
                break;
            }
        }
        if (ok) return x;
    }
    return std::nullopt;
}

/// The order-4 tensor with E x^3 = ||x||_2^2 x, materialized as the symmetric
/// combination of Kronecker deltas: E_{ijkl} = (d_ij d_kl + d_ik d_jl +
/// d_il d_jk) / 3.
inline Tensor e_tensor_m4(int n) {
    Tensor t = Tensor::zeros(4, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    const double v = ((i == j && k == l ? 1.0 : 0.0) +
                                      (i == k && j == l ? 1.0 : 0.0) +
                                      (i == l && j == k ? 1.0 : 0.0)) /
                                     3.0;
                    t.at({i, j, k, l}) = v;
                }
    return t;
}

/// Diagonal tensor of the given order from its diagonal entries.
inline Tensor diag_tensor(int order, const std::vector<double>& d) {
    const int n = static_cast<int>(d.size());
    Tensor t = Tensor::zeros(order, n);
    for (int i = 0; i < n; ++i) {
        std::vector<int> idx(static_cast<std::size_t>(order), i);
        t.at(idx) = d[static_cast<std::size_t>(i)];
    }
    return t;
}

/// m = 2 tensor from a row-major matrix.
inline Tensor matrix_tensor(int n, const std::vector<double>& mat) {
    return Tensor(2, n, mat);
}

/// Random symmetric matrix as an m = 2 tensor.
inline Tensor random_symmetric_matrix(int n, std::mt19937_64& rng, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    std::vector<double> mat(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double v = u(rng);
            mat[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)] = v;
            mat[static_cast<std::size_t>(j) * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)] = v;
        }
    return Tensor(2, n, std::move(mat));
}

}  // namespace testsup
