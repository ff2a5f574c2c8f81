#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "alpha.hpp"
#include "classify.hpp"
#include "eigenpairs.hpp"
#include "generate.hpp"
#include "spectral.hpp"
#include "tcp.hpp"
#include "tensor.hpp"

namespace ptensor {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Files. All parse/shape problems surface as InputError (CLI exit code 2).
// ---------------------------------------------------------------------------

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InputError("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

inline void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write file: " + path);
    out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Tensor: { "m": int, "n": int, "entries": [n^m reals, row-major, i1 slowest] }
// ---------------------------------------------------------------------------

inline Tensor tensor_from_json(const json& j) {
    if (!j.is_object() || !j.contains("m") || !j.contains("n") || !j.contains("entries"))
        throw InputError("tensor JSON requires \"m\", \"n\", and \"entries\"");
    if (!j["m"].is_number_integer() || !j["n"].is_number_integer())
        throw InputError("tensor JSON: \"m\" and \"n\" must be integers");
    if (!j["entries"].is_array())
        throw InputError("tensor JSON: \"entries\" must be an array");
    const int m = j["m"].get<int>();
    const int n = j["n"].get<int>();
    std::vector<double> entries;
    entries.reserve(j["entries"].size());
    for (const auto& e : j["entries"]) {
        if (!e.is_number()) throw InputError("tensor JSON: entries must be finite numbers");
        entries.push_back(e.get<double>());
    }
    return Tensor(m, n, std::move(entries));  // length/finiteness enforced here
}

inline json tensor_to_json(const Tensor& a) {
    return json{{"m", a.order()}, {"n", a.dim()}, {"entries", a.entries()}};
}

inline Tensor read_tensor(const std::string& path) { return tensor_from_json(read_json_file(path)); }

inline void write_tensor(const std::string& path, const Tensor& a) {
    write_json_file(path, tensor_to_json(a));
}

// ---------------------------------------------------------------------------
// Vectors: plain JSON arrays of finite numbers.
// ---------------------------------------------------------------------------

inline Vector vector_from_json(const json& j) {
    if (!j.is_array()) throw InputError("vector JSON must be an array of numbers");
    Vector x;
    x.reserve(j.size());
    for (const auto& e : j) {
        if (!e.is_number()) throw InputError("vector JSON must contain only finite numbers");
        const double v = e.get<double>();
        if (!std::isfinite(v)) throw InputError("vector JSON must contain only finite numbers");
        x.push_back(v);
    }
    return x;
}

inline Vector read_vector(const std::string& path) { return vector_from_json(read_json_file(path)); }

// ---------------------------------------------------------------------------
// Eigenpairs and delta reports.
// ---------------------------------------------------------------------------

inline json eigenpair_to_json(const Eigenpair& p) {
    return json{{"kind", p.kind == EigKind::H ? "H" : "Z"},
                {"lambda", p.lambda},
                {"x", p.x},
                {"residual", p.residual},
                {"heuristic", p.heuristic}};
}

inline json eigenpairs_to_json(const std::vector<Eigenpair>& pairs) {
    json arr = json::array();
    for (const auto& p : pairs) arr.push_back(eigenpair_to_json(p));
    return arr;
}

inline json subset_to_json(const Subset& s) { return json(s.members()); }

inline json delta_report_to_json(const DeltaReport& r) {
    json per = json::array();
    for (const auto& e : r.per_subset) {
        json je{{"subset", subset_to_json(e.subset)}};
        je["smallest_h"] = e.smallest_h ? json(*e.smallest_h) : json(nullptr);
        je["smallest_z"] = e.smallest_z ? json(*e.smallest_z) : json(nullptr);
        je["heuristic_h"] = e.heuristic_h;
        je["heuristic_z"] = e.heuristic_z;
        per.push_back(std::move(je));
    }
    json j;
    j["delta_h"] = r.delta_h ? json(*r.delta_h) : json(nullptr);
    j["delta_z"] = r.delta_z ? json(*r.delta_z) : json(nullptr);
    j["argmin_subset_h"] = r.argmin_subset_h ? subset_to_json(*r.argmin_subset_h) : json(nullptr);
    j["argmin_subset_z"] = r.argmin_subset_z ? subset_to_json(*r.argmin_subset_z) : json(nullptr);
    j["per_subset"] = std::move(per);
    j["heuristic"] = r.heuristic;
    return j;
}

// ---------------------------------------------------------------------------
// Alpha results and verdicts.
// ---------------------------------------------------------------------------

inline json alpha_result_to_json(const AlphaResult& r) {
    json j;
    j["value"] = r.value;
    j["minimizer"] = r.minimizer;
    j["op"] = r.objective_kind == OpKind::T ? "T" : "F";
    j["certification"] =
        r.certification == AlphaCert::grid_certified ? "grid-certified" : "heuristic";
    j["grid_resolution"] = r.grid_resolution ? json(*r.grid_resolution) : json(nullptr);
    j["grid_gap"] = r.grid_gap ? json(*r.grid_gap) : json(nullptr);
    return j;
}

inline std::string p_status_name(PStatus s) {
    switch (s) {
        case PStatus::P: return "P";
        case PStatus::P0_not_P: return "P0-not-P";
        case PStatus::not_P0: return "not-P0";
        case PStatus::undetermined: return "undetermined";
    }
    return "undetermined";
}

inline json verdict_to_json(const PVerdict& v) {
    json j;
    j["status"] = p_status_name(v.status);
    j["witness"] = v.witness ? json(*v.witness) : json(nullptr);
    j["alpha_t_value"] = v.alpha_t_value;
    j["certification"] = v.certification == PCert::certified ? "certified" : "heuristic";
    return j;
}

// ---------------------------------------------------------------------------
// TCP instances and solutions.
// Instance: { "tensor": <inline tensor object> | "<path>", "q": [reals] }
// ---------------------------------------------------------------------------

inline TcpInstance tcp_instance_from_json(const json& j) {
    if (!j.is_object() || !j.contains("tensor") || !j.contains("q"))
        throw InputError("TCP instance JSON requires \"tensor\" and \"q\"");
    Tensor a = j["tensor"].is_string() ? read_tensor(j["tensor"].get<std::string>())
                                       : tensor_from_json(j["tensor"]);
    return TcpInstance(std::move(a), vector_from_json(j["q"]));
}

inline TcpInstance read_tcp_instance(const std::string& path) {
    return tcp_instance_from_json(read_json_file(path));
}

inline json tcp_solution_to_json(const TcpSolution& s) {
    return json{{"x", s.x},
                {"w", s.w},
                {"residual", s.residual},
                {"iterations", s.iterations},
                {"converged", s.converged}};
}

}  // namespace ptensor
