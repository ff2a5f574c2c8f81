#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tensor.hpp"

namespace ptensor {

/// Random tensor families. Every family is deterministic given (kind, m, n,
/// seed, params): one mt19937_64 stream, fixed draw order.
enum class GenKind {
    identity,                    ///< unit tensor; ignores the seed
    diagonal_positive,           ///< zero off-diagonal, diagonal ~ U[lo, hi]
    identity_plus_perturbation,  ///< I + eps * P with max row abs sum of eps*P equal to eps
    symmetric_gaussian,          ///< entries N(0, sigma^2), symmetric under index permutation
    diagonally_dominant,         ///< diagonal strictly dominates the off-diagonal row abs sum
};

struct GenParams {
    double lo = 1.0;       ///< diagonal_positive: diagonal lower bound (> 0)
    double hi = 3.0;       ///< diagonal_positive: diagonal upper bound
    double epsilon = 0.1;  ///< identity_plus_perturbation: perturbation row-sum budget, in [0, 1)
    double sigma = 1.0;    ///< symmetric_gaussian: entry standard deviation
    double scale = 1.0;    ///< diagonally_dominant: off-diagonal entries ~ U[-scale, scale]
};

inline GenKind parse_gen_kind(const std::string& s) {
    if (s == "identity") return GenKind::identity;
    if (s == "diagonal-positive") return GenKind::diagonal_positive;
    if (s == "identity-plus-perturbation") return GenKind::identity_plus_perturbation;
    if (s == "symmetric-gaussian") return GenKind::symmetric_gaussian;
    if (s == "diagonally-dominant") return GenKind::diagonally_dominant;
    throw InputError("unknown generator kind: " + s);
}

inline std::string gen_kind_name(GenKind k) {
    switch (k) {
        case GenKind::identity: return "identity";
        case GenKind::diagonal_positive: return "diagonal-positive";
        case GenKind::identity_plus_perturbation: return "identity-plus-perturbation";
        case GenKind::symmetric_gaussian: return "symmetric-gaussian";
        case GenKind::diagonally_dominant: return "diagonally-dominant";
    }
    throw InputError("unknown generator kind");
}

namespace detail {

inline Tensor gen_diagonal_positive(int m, int n, std::mt19937_64& rng, const GenParams& p) {
    if (!(p.lo > 0.0) || !(p.hi >= p.lo))
        throw InputError("diagonal-positive requires 0 < lo <= hi");
    std::uniform_real_distribution<double> u(p.lo, p.hi);
    Tensor t = Tensor::zeros(m, n);
    for (int i = 0; i < n; ++i) {
        std::size_t f = 0;
        for (int k = 0; k < m; ++k) f = f * static_cast<std::size_t>(n) + static_cast<std::size_t>(i);
        t[f] = u(rng);
    }
    return t;
}

inline Tensor gen_identity_plus_perturbation(int m, int n, std::mt19937_64& rng, const GenParams& p) {
    if (!(p.epsilon >= 0.0) || !(p.epsilon < 1.0))
        throw InputError("identity-plus-perturbation requires epsilon in [0, 1)");
    Tensor t = unit_tensor(m, n);
    if (p.epsilon == 0.0) return t;
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> pert(t.size());
    for (double& v : pert) v = u(rng);
    // Normalize so the perturbation's max row abs sum is exactly epsilon;
    // then |(A - I)x^{m-1}|_inf <= eps ||x||_inf^{m-1} componentwise.
    Tensor q(m, n, std::move(pert));
    const Vector rows = row_abs_sums(q);
    double rmax = 0.0;
    for (double r : rows) rmax = std::max(rmax, r);
    if (rmax == 0.0) return t;
    const double c = p.epsilon / rmax;
    for (std::size_t k = 0; k < t.size(); ++k) t[k] += c * q[k];
    return t;
}

inline Tensor gen_symmetric_gaussian(int m, int n, std::mt19937_64& rng, const GenParams& p) {
    if (!(p.sigma > 0.0)) throw InputError("symmetric-gaussian requires sigma > 0");
    std::normal_distribution<double> g(0.0, p.sigma);
    Tensor t = Tensor::zeros(m, n);
    // One draw per sorted multi-index, shared across its permutations. The
    // odometer yields sorted tuples in a fixed order, so the stream layout is
    // reproducible.
    std::vector<int> tup(static_cast<std::size_t>(m), 0);
    do {
        bool sorted = true;
        for (int k = 1; k < m; ++k)
            if (tup[static_cast<std::size_t>(k)] < tup[static_cast<std::size_t>(k) - 1]) { sorted = false; break; }
        if (!sorted) continue;
        const double v = g(rng);
        std::vector<int> perm = tup;
        do {
            t.at(perm) = v;
        } while (std::next_permutation(perm.begin(), perm.end()));
    } while (detail::next_tuple(tup, n));
    return t;
}

inline Tensor gen_diagonally_dominant(int m, int n, std::mt19937_64& rng, const GenParams& p) {
    if (!(p.scale > 0.0)) throw InputError("diagonally-dominant requires scale > 0");
    std::uniform_real_distribution<double> u(-p.scale, p.scale);
    std::uniform_real_distribution<double> margin(0.5, 1.5);
    Tensor t = Tensor::zeros(m, n);
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = u(rng);
    // Overwrite the diagonal so each row is strictly dominant.
    std::vector<std::size_t> diag_flat(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        std::size_t f = 0;
        for (int k = 0; k < m; ++k) f = f * static_cast<std::size_t>(n) + static_cast<std::size_t>(i);
        diag_flat[static_cast<std::size_t>(i)] = f;
        t[f] = 0.0;
    }
    const Vector off = row_abs_sums(t);
    for (int i = 0; i < n; ++i)
        t[diag_flat[static_cast<std::size_t>(i)]] = off[static_cast<std::size_t>(i)] + margin(rng);
    return t;
}

}  // namespace detail

/// Draw one tensor from the given family.
inline Tensor gen_random(GenKind kind, int m, int n, std::uint64_t seed,
                         const GenParams& params = {}) {
    checked_entry_count(m, n);
    std::mt19937_64 rng(seed);
    switch (kind) {
        case GenKind::identity: return unit_tensor(m, n);
        case GenKind::diagonal_positive: return detail::gen_diagonal_positive(m, n, rng, params);
        case GenKind::identity_plus_perturbation:
            return detail::gen_identity_plus_perturbation(m, n, rng, params);
        case GenKind::symmetric_gaussian: return detail::gen_symmetric_gaussian(m, n, rng, params);
        case GenKind::diagonally_dominant: return detail::gen_diagonally_dominant(m, n, rng, params);
    }
    throw InputError("unknown generator kind");
}

}  // namespace ptensor
