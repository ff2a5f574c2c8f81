#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "alpha.hpp"
#include "generate.hpp"
#include "json_io.hpp"
#include "spectral.hpp"
#include "tensor.hpp"

namespace ptensor {

enum class Outcome { holds, holds_within_gap, violated, not_applicable };

/// One checked inequality lhs <= rhs. `gap` is the certification allowance:
/// margins beyond it count as clean holds, margins inside it as
/// holds-within-gap (visible for equality-tight cases like the unit tensor),
/// and anything below -gap as a violation.
struct Inequality {
    std::string name;
    std::optional<double> lhs;
    std::optional<double> rhs;
    double margin = 0.0;  ///< rhs - lhs when both sides exist
    double gap = 0.0;
    Outcome outcome = Outcome::not_applicable;
};

struct BoundConfig {
    EigConfig eig;
    AlphaConfig alpha;
    int norm_samples = 1000;
    std::uint64_t seed = 90210;  ///< for the sampled norm check
    double tol = 1e-6;           ///< numerical slack folded into every gap
};

/// Everything verify_bounds measures for one tensor: both three-term bound
/// chains, the monotonicity and boundedness comparisons, and the sampled
/// operator norm check.
struct BoundReport {
    int m = 0;
    int n = 0;
    double min_diag = 0.0;
    AlphaResult alpha_t;
    std::optional<AlphaResult> alpha_f;
    DeltaReport delta;
    double norm_bound_t = 0.0;
    std::optional<double> norm_bound_f;
    std::vector<Inequality> chain_f;          ///< alpha_F <= delta_H^{1/(m-1)} <= min_diag^{1/(m-1)}
    std::vector<Inequality> chain_t;         ///< alpha_T <= delta_Z <= min_diag
    std::vector<Inequality> monotonicity_t;  ///< alpha_T(A) <= alpha_T(A_J), proper J
    std::vector<Inequality> monotonicity_f;
    Inequality bounded_t;  ///< alpha_T(A) <= max row abs sum
    std::optional<Inequality> bounded_f;
    Inequality sampled_t;  ///< max sampled ||T(x)||_inf over the sphere <= bound
    std::optional<Inequality> sampled_f;
    bool any_violation = false;
    bool heuristic = false;  ///< some ingredient came from a heuristic path
};

inline std::string outcome_name(Outcome o) {
    switch (o) {
        case Outcome::holds: return "holds";
        case Outcome::holds_within_gap: return "holds-within-gap";
        case Outcome::violated: return "violated";
        case Outcome::not_applicable: return "not-applicable";
    }
    return "not-applicable";
}

namespace detail {

inline double signed_root(double v, int p) {
    // p odd: real sign-preserving root.
    return v >= 0.0 ? std::pow(v, 1.0 / p) : -std::pow(-v, 1.0 / p);
}

inline Inequality make_inequality(std::string name, std::optional<double> lhs,
                                  std::optional<double> rhs, double gap) {
    Inequality q;
    q.name = std::move(name);
    q.lhs = lhs;
    q.rhs = rhs;
    q.gap = gap;
    if (!lhs || !rhs) {
        q.outcome = Outcome::not_applicable;
        return q;
    }
    q.margin = *rhs - *lhs;
    if (q.margin > gap)
        q.outcome = Outcome::holds;
    else if (q.margin >= -gap)
        q.outcome = Outcome::holds_within_gap;
    else
        q.outcome = Outcome::violated;
    return q;
}

inline AlphaConfig subtensor_alpha_cfg(const AlphaConfig& cfg, int r) {
    AlphaConfig sub = cfg;
    if (r > 3 && sub.mode == AlphaMode::grid_certified) sub.mode = AlphaMode::heuristic;
    return sub;
}

/// Zero-pad a sub-tensor minimizer back to full dimension so it can seed the
/// full search; on P0 fixtures the padded point attains the sub-tensor's
/// objective value, which pins the computed monotonicity inequalities.
inline Vector pad_to_full(const Vector& sub, const Subset& j, int n) {
    Vector x(static_cast<std::size_t>(n), 0.0);
    for (int k = 0; k < j.size(); ++k)
        x[static_cast<std::size_t>(j.members()[static_cast<std::size_t>(k)] - 1)] =
            sub[static_cast<std::size_t>(k)];
    return x;
}

inline std::string subset_label(const Subset& j) {
    std::string s = "{";
    for (int k = 0; k < j.size(); ++k) {
        if (k) s += ",";
        s += std::to_string(j.members()[static_cast<std::size_t>(k)]);
    }
    s += "}";
    return s;
}

}  // namespace detail

/// Evaluate both theorem chains plus the monotonicity, boundedness and
/// operator-norm comparisons for one tensor. Odd m marks every F-dependent
/// entry not-applicable. On a P input every outcome should be holds or
/// holds-within-gap; a violation beyond the gaps means either a numerics bug
/// or a non-P input.
inline BoundReport verify_bounds(const Tensor& a, const BoundConfig& cfg = {}) {
    const int m = a.order();
    const int n = a.dim();
    const bool even = (m % 2 == 0);

    BoundReport rep;
    rep.m = m;
    rep.n = n;
    rep.min_diag = a.min_diagonal();
    rep.norm_bound_t = operator_norm_bound(a, OpKind::T);
    if (even) rep.norm_bound_f = operator_norm_bound(a, OpKind::F);

    rep.delta = delta_report(a, cfg.eig);
    rep.heuristic = rep.delta.heuristic;

    // Sub-tensor alphas first: they feed both the monotonicity entries and
    // the seed list for the full-tensor search.
    struct SubAlpha {
        Subset j;
        AlphaResult at;
        std::optional<AlphaResult> af;
    };
    std::vector<SubAlpha> subs;
    std::vector<Vector> seeds_t, seeds_f;
    for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {  // proper subsets only
        Subset j = Subset::from_mask(mask, n);
        const Tensor sub = principal_subtensor(a, j);
        const AlphaConfig scfg = detail::subtensor_alpha_cfg(cfg.alpha, j.size());
        AlphaResult at = alpha_t(sub, scfg);
        seeds_t.push_back(detail::pad_to_full(at.minimizer, j, n));
        std::optional<AlphaResult> af;
        if (even) {
            af = alpha_f(sub, scfg);
            seeds_f.push_back(detail::pad_to_full(af->minimizer, j, n));
        }
        subs.push_back(SubAlpha{std::move(j), std::move(at), std::move(af)});
    }

    const AlphaConfig fcfg = detail::subtensor_alpha_cfg(cfg.alpha, n);
    rep.alpha_t = alpha_t(a, fcfg, seeds_t);
    if (even) rep.alpha_f = alpha_f(a, fcfg, seeds_f);
    if (rep.alpha_t.certification == AlphaCert::heuristic) rep.heuristic = true;

    const double gap_t = rep.alpha_t.grid_gap.value_or(0.0) + cfg.tol;
    const double gap_f =
        rep.alpha_f ? rep.alpha_f->grid_gap.value_or(0.0) + cfg.tol : cfg.tol;

    // F-side chain alpha_F <= delta_H^{1/(m-1)} <= (min diag)^{1/(m-1)},
    // even m only.
    if (even) {
        std::optional<double> root_dh;
        if (rep.delta.delta_h) root_dh = detail::signed_root(*rep.delta.delta_h, m - 1);
        rep.chain_f.push_back(detail::make_inequality(
            "alpha_F <= delta_H^(1/(m-1))", rep.alpha_f->value, root_dh, gap_f));
        rep.chain_f.push_back(detail::make_inequality(
            "delta_H^(1/(m-1)) <= min_diag^(1/(m-1))", root_dh,
            detail::signed_root(rep.min_diag, m - 1), cfg.tol));
    } else {
        rep.chain_f.push_back(detail::make_inequality("alpha_F <= delta_H^(1/(m-1))",
                                                     std::nullopt, std::nullopt, 0.0));
        rep.chain_f.push_back(detail::make_inequality("delta_H^(1/(m-1)) <= min_diag^(1/(m-1))",
                                                     std::nullopt, std::nullopt, 0.0));
    }

    // T-side chain alpha_T <= delta_Z <= min diag. Stated for even m;
    // still evaluated for odd m as data, where a violation just signals the
    // missing hypothesis.
    rep.chain_t.push_back(
        detail::make_inequality("alpha_T <= delta_Z", rep.alpha_t.value, rep.delta.delta_z, gap_t));
    rep.chain_t.push_back(
        detail::make_inequality("delta_Z <= min_diag", rep.delta.delta_z, rep.min_diag, cfg.tol));

    // Monotonicity: alpha never drops when restricting to a proper
    // principal sub-tensor. Boundedness: alpha never beats the row-sum norm
    // bound.
    for (const auto& s : subs) {
        rep.monotonicity_t.push_back(
            detail::make_inequality("alpha_T(A) <= alpha_T(A_J), J=" + detail::subset_label(s.j),
                                    rep.alpha_t.value, s.at.value, cfg.tol));
        if (even)
            rep.monotonicity_f.push_back(detail::make_inequality(
                "alpha_F(A) <= alpha_F(A_J), J=" + detail::subset_label(s.j),
                rep.alpha_f->value, s.af->value, cfg.tol));
    }
    rep.bounded_t = detail::make_inequality("alpha_T <= max_row_abs_sum", rep.alpha_t.value,
                                            rep.norm_bound_t, cfg.tol);
    if (even)
        rep.bounded_f = detail::make_inequality("alpha_F <= max_row_abs_sum^(1/(m-1))",
                                                rep.alpha_f->value, *rep.norm_bound_f, cfg.tol);

    // Sampled operator norms never beat the row-sum bound.
    {
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        double worst_t = 0.0, worst_f = 0.0;
        for (int k = 0; k < cfg.norm_samples; ++k) {
            Vector x(static_cast<std::size_t>(n));
            for (double& v : x) v = u(rng);
            const double nrm = inf_norm(x);
            if (nrm < 1e-12) continue;
            for (double& v : x) v /= nrm;
            worst_t = std::max(worst_t, inf_norm(t_operator(a, x)));
            if (even) worst_f = std::max(worst_f, inf_norm(f_operator(a, x)));
        }
        rep.sampled_t = detail::make_inequality("max sampled ||T(x)||_inf <= bound", worst_t,
                                                rep.norm_bound_t, 1e-10);
        if (even)
            rep.sampled_f = detail::make_inequality("max sampled ||F(x)||_inf <= bound", worst_f,
                                                    *rep.norm_bound_f, 1e-10);
    }

    auto scan = [&](const std::vector<Inequality>& v) {
        for (const auto& q : v)
            if (q.outcome == Outcome::violated) rep.any_violation = true;
    };
    scan(rep.chain_f);
    scan(rep.chain_t);
    scan(rep.monotonicity_t);
    scan(rep.monotonicity_f);
    scan({rep.bounded_t});
    if (rep.bounded_f) scan({*rep.bounded_f});
    scan({rep.sampled_t});
    if (rep.sampled_f) scan({*rep.sampled_f});
    return rep;
}

// ---------------------------------------------------------------------------
// Serialization and plain-text rendering.
// ---------------------------------------------------------------------------

inline json inequality_to_json(const Inequality& q) {
    json j;
    j["name"] = q.name;
    j["lhs"] = q.lhs ? json(*q.lhs) : json(nullptr);
    j["rhs"] = q.rhs ? json(*q.rhs) : json(nullptr);
    j["margin"] = q.margin;
    j["gap"] = q.gap;
    j["outcome"] = outcome_name(q.outcome);
    return j;
}

inline json bound_report_to_json(const BoundReport& r) {
    auto arr = [](const std::vector<Inequality>& v) {
        json a = json::array();
        for (const auto& q : v) a.push_back(inequality_to_json(q));
        return a;
    };
    json j;
    j["m"] = r.m;
    j["n"] = r.n;
    j["min_diag"] = r.min_diag;
    j["alpha_t"] = alpha_result_to_json(r.alpha_t);
    j["alpha_f"] = r.alpha_f ? alpha_result_to_json(*r.alpha_f) : json(nullptr);
    j["delta"] = delta_report_to_json(r.delta);
    j["norm_bound_t"] = r.norm_bound_t;
    j["norm_bound_f"] = r.norm_bound_f ? json(*r.norm_bound_f) : json(nullptr);
    j["chain_f"] = arr(r.chain_f);
    j["chain_t"] = arr(r.chain_t);
    j["monotonicity_t"] = arr(r.monotonicity_t);
    j["monotonicity_f"] = arr(r.monotonicity_f);
    j["bounded_t"] = inequality_to_json(r.bounded_t);
    j["bounded_f"] = r.bounded_f ? inequality_to_json(*r.bounded_f) : json(nullptr);
    j["sampled_t"] = inequality_to_json(r.sampled_t);
    j["sampled_f"] = r.sampled_f ? inequality_to_json(*r.sampled_f) : json(nullptr);
    j["any_violation"] = r.any_violation;
    j["heuristic"] = r.heuristic;
    return j;
}

namespace detail {

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline std::string fmt_opt(const std::optional<double>& v) {
    return v ? fmt(*v) : std::string("n/a");
}

inline void append_line(std::string& out, const Inequality& q) {
    out += "  " + q.name + ": ";
    if (q.outcome == Outcome::not_applicable) {
        out += "not-applicable\n";
        return;
    }
    out += fmt_opt(q.lhs) + " <= " + fmt_opt(q.rhs) + "  [" + outcome_name(q.outcome) +
           ", margin " + fmt(q.margin) + ", gap " + fmt(q.gap) + "]\n";
}

}  // namespace detail

inline std::string bound_report_to_text(const BoundReport& r) {
    std::string out;
    out += "tensor: m=" + std::to_string(r.m) + " n=" + std::to_string(r.n) +
           "  min_diag=" + detail::fmt(r.min_diag) + "\n";
    out += "alpha_T=" + detail::fmt(r.alpha_t.value);
    if (r.alpha_f) out += "  alpha_F=" + detail::fmt(r.alpha_f->value);
    out += "  delta_H=" + detail::fmt_opt(r.delta.delta_h) +
           "  delta_Z=" + detail::fmt_opt(r.delta.delta_z) + "\n";
    out += "chain alpha_F <= delta_H^(1/(m-1)) <= min_diag^(1/(m-1)):\n";
    for (const auto& q : r.chain_f) detail::append_line(out, q);
    out += "chain alpha_T <= delta_Z <= min_diag:\n";
    for (const auto& q : r.chain_t) detail::append_line(out, q);
    out += "monotonicity:\n";
    for (const auto& q : r.monotonicity_t) detail::append_line(out, q);
    for (const auto& q : r.monotonicity_f) detail::append_line(out, q);
    out += "boundedness and sampled norms:\n";
    detail::append_line(out, r.bounded_t);
    if (r.bounded_f) detail::append_line(out, *r.bounded_f);
    detail::append_line(out, r.sampled_t);
    if (r.sampled_f) detail::append_line(out, *r.sampled_f);
    out += std::string("overall: ") + (r.any_violation ? "VIOLATION" : "ok") +
           (r.heuristic ? " (heuristic ingredients)" : " (certified ingredients)") + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// Batch experiments over generated instance sets.
// ---------------------------------------------------------------------------

struct GeneratorSpec {
    GenKind kind = GenKind::identity_plus_perturbation;
    int m = 4;
    int n = 2;
    GenParams params;
    std::uint64_t seed = 1;  ///< instance k draws with seed + k
};

struct InstanceSummary {
    int index = 0;
    std::uint64_t seed = 0;
    double alpha_t = 0.0;
    std::optional<double> alpha_f;
    std::optional<double> delta_h;
    std::optional<double> delta_z;
    double min_diag = 0.0;
    bool any_violation = false;
    bool heuristic = false;
};

struct BatchReport {
    GeneratorSpec spec;
    int count_requested = 0;
    int count_processed = 0;
    std::vector<InstanceSummary> instances;
    std::optional<int> violation_index;
    std::string reproducer_path;  ///< nonempty once a reproducer was written
    std::optional<double> alpha_t_min, alpha_t_mean;
    std::optional<double> alpha_f_min, alpha_f_mean;
};

/// Run verify_bounds over `count` seeded instances. The first violation
/// halts the sweep and dumps a full reproducer (seed, instance tensor, and
/// report) to `reproducer_path`; empirical alpha aggregates cover the
/// processed prefix either way.
inline BatchReport batch_experiment(const GeneratorSpec& spec, int count,
                                    const BoundConfig& cfg = {},
                                    const std::string& reproducer_path = "batch-reproducer.json") {
    if (count < 0) throw InputError("batch count must be nonnegative");
    BatchReport rep;
    rep.spec = spec;
    rep.count_requested = count;
    double sum_t = 0.0, sum_f = 0.0;
    int count_f = 0;
    for (int k = 0; k < count; ++k) {
        const std::uint64_t seed = spec.seed + static_cast<std::uint64_t>(k);
        const Tensor a = gen_random(spec.kind, spec.m, spec.n, seed, spec.params);
        const BoundReport br = verify_bounds(a, cfg);
        InstanceSummary s;
        s.index = k;
        s.seed = seed;
        s.alpha_t = br.alpha_t.value;
        if (br.alpha_f) s.alpha_f = br.alpha_f->value;
        s.delta_h = br.delta.delta_h;
        s.delta_z = br.delta.delta_z;
        s.min_diag = br.min_diag;
        s.any_violation = br.any_violation;
        s.heuristic = br.heuristic;
        rep.instances.push_back(s);
        ++rep.count_processed;

        if (!rep.alpha_t_min || s.alpha_t < *rep.alpha_t_min) rep.alpha_t_min = s.alpha_t;
        sum_t += s.alpha_t;
        if (s.alpha_f) {
            if (!rep.alpha_f_min || *s.alpha_f < *rep.alpha_f_min) rep.alpha_f_min = *s.alpha_f;
            sum_f += *s.alpha_f;
            ++count_f;
        }

        if (br.any_violation) {
            rep.violation_index = k;
            rep.reproducer_path = reproducer_path;
            json repro;
            repro["generator"] = gen_kind_name(spec.kind);
            repro["seed"] = seed;
            repro["index"] = k;
            repro["tensor"] = tensor_to_json(a);
            repro["report"] = bound_report_to_json(br);
            write_json_file(reproducer_path, repro);
            break;
        }
    }
    if (rep.count_processed > 0) {
        rep.alpha_t_mean = sum_t / rep.count_processed;
        if (count_f > 0) rep.alpha_f_mean = sum_f / count_f;
    }
    return rep;
}

inline json batch_report_to_json(const BatchReport& r) {
    json inst = json::array();
    for (const auto& s : r.instances) {
        json js;
        js["index"] = s.index;
        js["seed"] = s.seed;
        js["alpha_t"] = s.alpha_t;
        js["alpha_f"] = s.alpha_f ? json(*s.alpha_f) : json(nullptr);
        js["delta_h"] = s.delta_h ? json(*s.delta_h) : json(nullptr);
        js["delta_z"] = s.delta_z ? json(*s.delta_z) : json(nullptr);
        js["min_diag"] = s.min_diag;
        js["any_violation"] = s.any_violation;
        js["heuristic"] = s.heuristic;
        inst.push_back(std::move(js));
    }
    json j;
    j["generator"] = gen_kind_name(r.spec.kind);
    j["m"] = r.spec.m;
    j["n"] = r.spec.n;
    j["base_seed"] = r.spec.seed;
    j["count_requested"] = r.count_requested;
    j["count_processed"] = r.count_processed;
    j["instances"] = std::move(inst);
    j["violation_index"] = r.violation_index ? json(*r.violation_index) : json(nullptr);
    j["reproducer_path"] = r.reproducer_path;
    j["alpha_t_min"] = r.alpha_t_min ? json(*r.alpha_t_min) : json(nullptr);
    j["alpha_t_mean"] = r.alpha_t_mean ? json(*r.alpha_t_mean) : json(nullptr);
    j["alpha_f_min"] = r.alpha_f_min ? json(*r.alpha_f_min) : json(nullptr);
    j["alpha_f_mean"] = r.alpha_f_mean ? json(*r.alpha_f_mean) : json(nullptr);
    return j;
}

inline std::string batch_report_to_text(const BatchReport& r) {
    std::string out;
    out += "batch: " + gen_kind_name(r.spec.kind) + " m=" + std::to_string(r.spec.m) +
           " n=" + std::to_string(r.spec.n) + " count=" + std::to_string(r.count_requested) +
           " base_seed=" + std::to_string(r.spec.seed) + "\n";
    char buf[200];
    std::snprintf(buf, sizeof buf, "%-6s %-12s %-14s %-14s %-14s %-14s %-10s\n", "idx", "seed",
                  "alpha_T", "alpha_F", "delta_H", "delta_Z", "chains");
    out += buf;
    for (const auto& s : r.instances) {
        std::snprintf(buf, sizeof buf, "%-6d %-12llu %-14.8g %-14s %-14s %-14s %-10s\n", s.index,
                      static_cast<unsigned long long>(s.seed), s.alpha_t,
                      detail::fmt_opt(s.alpha_f).c_str(), detail::fmt_opt(s.delta_h).c_str(),
                      detail::fmt_opt(s.delta_z).c_str(), s.any_violation ? "VIOLATED" : "ok");
        out += buf;
    }
    out += "processed " + std::to_string(r.count_processed) + "/" + std::to_string(r.count_requested);
    if (r.violation_index)
        out += "; halted at index " + std::to_string(*r.violation_index) + ", reproducer: " +
               r.reproducer_path;
    out += "\n";
    out += "alpha_T min/mean: " + detail::fmt_opt(r.alpha_t_min) + " / " +
           detail::fmt_opt(r.alpha_t_mean) + "\n";
    out += "alpha_F min/mean: " + detail::fmt_opt(r.alpha_f_min) + " / " +
           detail::fmt_opt(r.alpha_f_mean) + "\n";
    return out;
}

}  // namespace ptensor
