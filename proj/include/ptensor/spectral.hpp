#pragma once

#include <optional>
#include <vector>

#include "eigenpairs.hpp"
#include "tensor.hpp"

namespace ptensor {

/// Per-subset record inside a DeltaReport.
struct SubsetEntry {
    Subset subset;
    std::optional<double> smallest_h;
    std::optional<double> smallest_z;
    bool heuristic_h = false;
    bool heuristic_z = false;
};

/// delta_h / delta_z: the minimum of smallest H-/Z-eigenvalues over all
/// 2^n - 1 principal sub-tensors. A delta is absent only when no
/// sub-tensor yielded that eigenvalue kind at all; sub-tensors without
/// eigenvalues are skipped, matching the definition's "if any exists".
struct DeltaReport {
    std::optional<double> delta_h;
    std::optional<double> delta_z;
    std::optional<Subset> argmin_subset_h;
    std::optional<Subset> argmin_subset_z;
    std::vector<SubsetEntry> per_subset;  ///< all 2^n - 1 subsets, mask order
    bool heuristic = false;  ///< some contributing solve used the multi-start path
};

namespace detail {

inline bool solve_is_heuristic(int r, const EigConfig& cfg) {
    if (r == 1) return false;
    if (cfg.method == EigMethod::newton) return true;
    if (cfg.method == EigMethod::scan) return false;
    return r >= 3;
}

inline DeltaReport delta_impl(const Tensor& a, const EigConfig& cfg, bool want_h, bool want_z) {
    const int n = a.dim();
    if (n > 6) throw InputError("delta constants support n <= 6 (exhaustive subset enumeration)");
    DeltaReport rep;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        Subset j = Subset::from_mask(mask, n);
        const Tensor sub = principal_subtensor(a, j);
        SubsetEntry entry{j, std::nullopt, std::nullopt, false, false};
        const bool heur = solve_is_heuristic(j.size(), cfg);
        if (want_h) {
            if (auto lam = smallest_h(sub, cfg)) {
                entry.smallest_h = lam;
                entry.heuristic_h = heur;
                if (!rep.delta_h || *lam < *rep.delta_h) {
                    rep.delta_h = lam;
                    rep.argmin_subset_h = j;
                }
                if (heur) rep.heuristic = true;
            }
        }
        if (want_z) {
            if (auto lam = smallest_z(sub, cfg)) {
                entry.smallest_z = lam;
                entry.heuristic_z = heur;
                if (!rep.delta_z || *lam < *rep.delta_z) {
                    rep.delta_z = lam;
                    rep.argmin_subset_z = j;
                }
                if (heur) rep.heuristic = true;
            }
        }
        rep.per_subset.push_back(std::move(entry));
    }
    return rep;
}

}  // namespace detail

/// DeltaReport with the H side filled.
inline DeltaReport delta_h(const Tensor& a, const EigConfig& cfg = {}) {
    return detail::delta_impl(a, cfg, true, false);
}

/// DeltaReport with the Z side filled.
inline DeltaReport delta_z(const Tensor& a, const EigConfig& cfg = {}) {
    return detail::delta_impl(a, cfg, false, true);
}

/// Both constants in one subset sweep.
inline DeltaReport delta_report(const Tensor& a, const EigConfig& cfg = {}) {
    return detail::delta_impl(a, cfg, true, true);
}

}  // namespace ptensor
