#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace ptensor {

/// Thrown for malformed inputs (bad dimensions, invalid subsets, domain
/// violations). The CLI maps it to exit code 2.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

using Vector = std::vector<double>;

inline double inf_norm(const Vector& x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

inline double two_norm(const Vector& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

/// n^m with an overflow/size guard. Storage is dense, so anything past the
/// desk scale this toolkit targets is rejected up front.
inline std::size_t checked_entry_count(int order, int dim) {
    if (order < 2) throw InputError("tensor order must be >= 2");
    if (dim < 1) throw InputError("tensor dimension must be >= 1");
    constexpr std::size_t kMaxEntries = 100'000'000;
    std::size_t count = 1;
    for (int k = 0; k < order; ++k) {
        if (count > kMaxEntries / static_cast<std::size_t>(dim))
            throw InputError("tensor too large for dense storage (n^m > 1e8)");
        count *= static_cast<std::size_t>(dim);
    }
    return count;
}

/// Dense real tensor of order m and dimension n: n^m entries in row-major
/// order over index tuples (i1,...,im), i1 slowest. Entries must be finite.
/// Immutable in spirit: all operations below are pure functions, so values
/// are safe to share across threads.
class Tensor {
public:
    Tensor(int order, int dim, std::vector<double> entries)
        : order_(order), dim_(dim), entries_(std::move(entries)) {
        const std::size_t expect = checked_entry_count(order, dim);
        if (entries_.size() != expect)
            throw InputError("tensor entry count mismatch: expected " +
                             std::to_string(expect) + ", got " +
                             std::to_string(entries_.size()));
        for (double v : entries_)
            if (!std::isfinite(v))
                throw InputError("tensor entries must be finite");
    }

    static Tensor zeros(int order, int dim) {
        return Tensor(order, dim, std::vector<double>(checked_entry_count(order, dim), 0.0));
    }

    int order() const { return order_; }
    int dim() const { return dim_; }
    std::size_t size() const { return entries_.size(); }
    const std::vector<double>& entries() const { return entries_; }

    double operator[](std::size_t flat) const { return entries_[flat]; }
    double& operator[](std::size_t flat) { return entries_[flat]; }

    /// Flat offset of a 0-based multi-index (i1 slowest).
    std::size_t flat_index(const std::vector<int>& idx) const {
        std::size_t f = 0;
        for (int i : idx) f = f * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
        return f;
    }

    double at(const std::vector<int>& idx) const { return entries_[flat_index(idx)]; }
    double& at(const std::vector<int>& idx) { return entries_[flat_index(idx)]; }

    /// Principal diagonal entry a_{ii...i}, 0-based i.
    double diagonal(int i) const {
        std::size_t f = 0;
        for (int k = 0; k < order_; ++k) f = f * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
        return entries_[f];
    }

    double min_diagonal() const {
        double m = diagonal(0);
        for (int i = 1; i < dim_; ++i) m = std::min(m, diagonal(i));
        return m;
    }

private:
    int order_;
    int dim_;
    std::vector<double> entries_;
};

inline Tensor operator*(double c, const Tensor& a) {
    std::vector<double> e = a.entries();
    for (double& v : e) v *= c;
    return Tensor(a.order(), a.dim(), std::move(e));
}

inline Tensor operator+(const Tensor& a, const Tensor& b) {
    if (a.order() != b.order() || a.dim() != b.dim())
        throw InputError("tensor shape mismatch in addition");
    std::vector<double> e = a.entries();
    for (std::size_t k = 0; k < e.size(); ++k) e[k] += b.entries()[k];
    return Tensor(a.order(), a.dim(), std::move(e));
}

inline Tensor operator-(const Tensor& a, const Tensor& b) {
    return a + (-1.0 * b);
}

/// Nonempty subset of {1..n} selecting a principal sub-tensor. Members are
/// 1-based (matching the file formats) and strictly increasing.
class Subset {
public:
    explicit Subset(std::vector<int> members) : members_(std::move(members)) {
        if (members_.empty()) throw InputError("subset must be nonempty");
        for (std::size_t k = 0; k < members_.size(); ++k) {
            if (members_[k] < 1) throw InputError("subset members are 1-based");
            if (k > 0 && members_[k] <= members_[k - 1])
                throw InputError("subset members must be strictly increasing");
        }
    }

    /// Subset from a bitmask (bit i set <=> index i+1 included).
    static Subset from_mask(unsigned mask, int n) {
        std::vector<int> members;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) members.push_back(i + 1);
        return Subset(std::move(members));
    }

    static Subset full(int n) {
        std::vector<int> members(static_cast<std::size_t>(n));
        std::iota(members.begin(), members.end(), 1);
        return Subset(std::move(members));
    }

    const std::vector<int>& members() const { return members_; }
    int size() const { return static_cast<int>(members_.size()); }
    int max_member() const { return members_.back(); }

    bool operator==(const Subset& other) const { return members_ == other.members_; }

private:
    std::vector<int> members_;
};

namespace detail {

/// Odometer over `digits` base-`base` counters. Returns false after the last
/// tuple. Tuples advance with the final digit fastest, matching row-major
/// entry order.
inline bool next_tuple(std::vector<int>& t, int base) {
    for (int k = static_cast<int>(t.size()) - 1; k >= 0; --k) {
        if (++t[k] < base) return true;
        t[k] = 0;
    }
    return false;
}

}  // namespace detail

namespace detail {

/// Implementation of `apply` as a function object: unqualified calls then
/// resolve through ordinary lookup alone, so argument-dependent lookup never
/// drags in std::apply (std::vector arguments would otherwise make it a
/// candidate, and instantiating it is a hard error).
struct ApplyFn {
    Vector operator()(const Tensor& a, const Vector& x) const {
        const int n = a.dim();
        if (static_cast<int>(x.size()) != n)
            throw InputError("vector length does not match tensor dimension");
        std::vector<double> buf = a.entries();
        std::size_t len = buf.size();
        for (int pass = 0; pass < a.order() - 1; ++pass) {
            const std::size_t outer = len / static_cast<std::size_t>(n);
            for (std::size_t i = 0; i < outer; ++i) {
                double s = 0.0;
                const double* row = buf.data() + i * static_cast<std::size_t>(n);
                for (int j = 0; j < n; ++j) s += row[j] * x[static_cast<std::size_t>(j)];
                buf[i] = s;
            }
            len = outer;
        }
        buf.resize(len);
        return buf;
    }
};

}  // namespace detail

/// A x^{m-1}: component i is sum over (i2..im) of a_{i i2...im} x_{i2}...x_{im}.
/// Computed by contracting the fastest-varying index with x, m-1 times.
inline constexpr detail::ApplyFn apply{};

/// Jacobian of x -> A x^{m-1}: row-major n x n matrix with
/// J[i][j] = d(A x^{m-1})_i / dx_j. Exact (sum over the m-1 variable slots),
/// no symmetry assumed.
inline std::vector<double> apply_jacobian(const Tensor& a, const Vector& x) {
    const int n = a.dim();
    const int m = a.order();
    if (static_cast<int>(x.size()) != n)
        throw InputError("vector length does not match tensor dimension");
    std::vector<double> jac(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
    const int slots = m - 1;
    std::vector<int> tup(static_cast<std::size_t>(slots), 0);
    std::vector<double> prefix(static_cast<std::size_t>(slots) + 1, 1.0);
    std::vector<double> suffix(static_cast<std::size_t>(slots) + 1, 1.0);
    const std::size_t row_len = a.size() / static_cast<std::size_t>(n);
    do {
        std::size_t off = 0;
        for (int k = 0; k < slots; ++k) off = off * static_cast<std::size_t>(n) + static_cast<std::size_t>(tup[static_cast<std::size_t>(k)]);
        // products of x over the tuple with one slot left out
        for (int k = 0; k < slots; ++k)
            prefix[static_cast<std::size_t>(k) + 1] = prefix[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(tup[static_cast<std::size_t>(k)])];
        for (int k = slots - 1; k >= 0; --k)
            suffix[static_cast<std::size_t>(k)] = suffix[static_cast<std::size_t>(k) + 1] * x[static_cast<std::size_t>(tup[static_cast<std::size_t>(k)])];
        for (int i = 0; i < n; ++i) {
            const double v = a.entries()[static_cast<std::size_t>(i) * row_len + off];
            if (v == 0.0) continue;
            for (int k = 0; k < slots; ++k) {
                jac[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(tup[static_cast<std::size_t>(k)])] +=
                    v * prefix[static_cast<std::size_t>(k)] * suffix[static_cast<std::size_t>(k) + 1];
            }
        }
    } while (detail::next_tuple(tup, n));
    return jac;
}

/// Componentwise x_i^p. Negative components are allowed for integer p and for
/// odd-order roots (p = 1/k, k odd), which are sign-preserving; an even-order
/// real root of a negative component is a domain error.
inline Vector power_vector(const Vector& x, double p) {
    Vector out(x.size());
    const double pr = std::round(p);
    const bool integral_p = std::abs(p - pr) <= 1e-12 * std::max(1.0, std::abs(p));
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double v = x[i];
        if (v >= 0.0 || integral_p) {
            out[i] = std::pow(v, integral_p ? pr : p);
        } else {
            const double k = 1.0 / p;
            const double kr = std::round(k);
            if (std::abs(k - kr) > 1e-9 * std::max(1.0, std::abs(k)))
                throw InputError("power_vector: non-integer power of a negative component");
            if (std::fmod(kr, 2.0) == 0.0)
                throw InputError("power_vector: even-order real root of a negative component");
            out[i] = -std::pow(-v, p);
        }
    }
    return out;
}

/// Principal sub-tensor A_r^J: all m indices restricted to J, re-indexed
/// consecutively by position in J.
inline Tensor principal_subtensor(const Tensor& a, const Subset& j) {
    if (j.max_member() > a.dim())
        throw InputError("subset member exceeds tensor dimension");
    const int r = j.size();
    const int m = a.order();
    std::vector<double> entries(checked_entry_count(m, r));
    std::vector<int> tup(static_cast<std::size_t>(m), 0);
    std::size_t pos = 0;
    do {
        std::size_t src = 0;
        for (int k = 0; k < m; ++k)
            src = src * static_cast<std::size_t>(a.dim()) + static_cast<std::size_t>(j.members()[static_cast<std::size_t>(tup[static_cast<std::size_t>(k)])] - 1);
        entries[pos++] = a.entries()[src];
    } while (detail::next_tuple(tup, r));
    return Tensor(m, r, std::move(entries));
}

/// Unit tensor I: diagonal entries 1, so that I x^{m-1} = x^{[m-1]}.
inline Tensor unit_tensor(int order, int dim) {
    Tensor t = Tensor::zeros(order, dim);
    for (int i = 0; i < dim; ++i) {
        std::size_t f = 0;
        for (int k = 0; k < order; ++k) f = f * static_cast<std::size_t>(dim) + static_cast<std::size_t>(i);
        t[f] = 1.0;
    }
    return t;
}

/// Action of the even-order tensor E = I2^{m/2}: E x^{m-1} = ||x||_2^{m-2} x.
/// E itself is never materialized.
inline Vector e_apply(const Vector& x, int order) {
    if (order < 2 || order % 2 != 0)
        throw InputError("e_apply requires even order");
    double sq = 0.0;
    for (double c : x) sq += c * c;
    // ||x||^{m-2} as an integer power of the squared norm (m is even).
    const double scale = std::pow(sq, (order - 2) / 2);
    Vector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = scale * x[i];
    return out;
}

/// Row absolute sums: component i is sum over (i2..im) of |a_{i i2...im}|.
inline Vector row_abs_sums(const Tensor& a) {
    const int n = a.dim();
    const std::size_t row_len = a.size() / static_cast<std::size_t>(n);
    Vector out(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        const double* row = a.entries().data() + static_cast<std::size_t>(i) * row_len;
        double s = 0.0;
        for (std::size_t k = 0; k < row_len; ++k) s += std::abs(row[k]);
        out[static_cast<std::size_t>(i)] = s;
    }
    return out;
}

/// Optional helper: average entries over all index permutations. Never
/// invoked implicitly; tensors are otherwise used exactly as given.
inline Tensor symmetrize(const Tensor& a) {
    const int m = a.order();
    const int n = a.dim();
    Tensor out = Tensor::zeros(m, n);
    std::vector<int> tup(static_cast<std::size_t>(m), 0);
    do {
        std::vector<int> sorted = tup;
        std::sort(sorted.begin(), sorted.end());
        double sum = 0.0;
        std::size_t count = 0;
        std::vector<int> perm = sorted;
        do {
            sum += a.at(perm);
            ++count;
        } while (std::next_permutation(perm.begin(), perm.end()));
        out.at(tup) = sum / static_cast<double>(count);
    } while (detail::next_tuple(tup, n));
    return out;
}

}  // namespace ptensor
