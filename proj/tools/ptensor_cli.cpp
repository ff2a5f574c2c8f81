// Command-line workbench over the header-only library: file I/O, one
// subcommand per operation, exit 0 on success, 1 on a violated invariant
// (bound violation / non-convergence), 2 on input errors.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ptensor/ptensor.hpp"

namespace {

using namespace ptensor;

void print_value(double v) {
    std::printf("%.17g\n", v);
}

EigConfig make_eig_config(std::uint64_t seed, double tol, int starts, const std::string& method) {
    EigConfig cfg;
    cfg.seed = seed;
    cfg.residual_tol = tol;
    cfg.starts = starts;
    if (method == "scan")
        cfg.method = EigMethod::scan;
    else if (method == "newton")
        cfg.method = EigMethod::newton;
    else if (method == "auto")
        cfg.method = EigMethod::automatic;
    else
        throw InputError("unknown eigensolver method: " + method);
    return cfg;
}

AlphaConfig make_alpha_config(const std::string& mode, double h, int starts, std::uint64_t seed,
                              double tol) {
    AlphaConfig cfg;
    if (mode == "grid")
        cfg.mode = AlphaMode::grid_certified;
    else if (mode == "heuristic")
        cfg.mode = AlphaMode::heuristic;
    else
        throw InputError("unknown alpha mode: " + mode);
    cfg.grid_resolution = h;
    cfg.starts = starts;
    cfg.seed = seed;
    cfg.tol = tol;
    return cfg;
}

GenKind parse_kind_or_throw(const std::string& kind) { return parse_gen_kind(kind); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"P-tensor toolkit: alpha constants, H/Z eigenvalues, delta constants, "
                 "P-classification, TCP solving, and bound verification"};
    app.require_subcommand(1);

    // Shared option state. Each subcommand binds only the flags it uses.
    std::string tensor_path, vector_path, out_path, instance_path;
    std::string op = "T", mode = "grid", kind_name = "identity", eig_kind = "both";
    std::string method = "auto", text_out, reproducer = "batch-reproducer.json", q_json;
    std::uint64_t seed = 1;
    double tol = -1.0, resolution = 0.02;
    int starts = -1, m_order = 4, n_dim = 2, count = 10, samples = 1000;
    GenParams gp;

    auto* c_apply = app.add_subcommand("apply", "Evaluate A x^{m-1}");
    c_apply->add_option("tensor", tensor_path, "tensor JSON file")->required();
    c_apply->add_option("vector", vector_path, "vector JSON file (array)")->required();

    auto* c_eig = app.add_subcommand("eig", "Real H-/Z-eigenpairs");
    c_eig->add_option("tensor", tensor_path)->required();
    c_eig->add_option("--kind", eig_kind, "H, Z, or both")->check(CLI::IsMember({"H", "Z", "both"}));
    c_eig->add_option("--seed", seed);
    c_eig->add_option("--tol", tol, "residual tolerance (default 1e-9)");
    c_eig->add_option("--starts", starts, "multi-start count (default 200)");
    c_eig->add_option("--method", method)->check(CLI::IsMember({"auto", "scan", "newton"}));
    c_eig->add_option("-o,--out", out_path, "also write the JSON to a file");

    auto* c_delta = app.add_subcommand("delta", "delta_H and delta_Z over all principal sub-tensors");
    c_delta->add_option("tensor", tensor_path)->required();
    c_delta->add_option("--seed", seed);
    c_delta->add_option("--tol", tol);
    c_delta->add_option("--starts", starts);
    c_delta->add_option("--method", method)->check(CLI::IsMember({"auto", "scan", "newton"}));
    c_delta->add_option("-o,--out", out_path);

    auto* c_alpha = app.add_subcommand("alpha", "alpha(T_A) or alpha(F_A)");
    c_alpha->add_option("tensor", tensor_path)->required();
    c_alpha->add_option("--op", op, "T or F")->check(CLI::IsMember({"T", "F"}));
    c_alpha->add_option("--mode", mode, "grid or heuristic")->check(CLI::IsMember({"grid", "heuristic"}));
    c_alpha->add_option("--resolution", resolution, "face grid spacing (default 0.02)");
    c_alpha->add_option("--starts", starts);
    c_alpha->add_option("--seed", seed);
    c_alpha->add_option("--tol", tol);
    c_alpha->add_option("-o,--out", out_path);

    auto* c_checkp = app.add_subcommand("check-p", "P / P0-not-P / not-P0 verdict");
    c_checkp->add_option("tensor", tensor_path)->required();
    c_checkp->add_option("--mode", mode)->check(CLI::IsMember({"grid", "heuristic"}));
    c_checkp->add_option("--resolution", resolution);
    c_checkp->add_option("--starts", starts);
    c_checkp->add_option("--seed", seed);
    c_checkp->add_option("--tol", tol);
    c_checkp->add_option("-o,--out", out_path);

    auto* c_tcp = app.add_subcommand("tcp-solve", "solve TCP(A, q)");
    c_tcp->add_option("instance", instance_path, "instance JSON: {\"tensor\": ..., \"q\": [...]}");
    c_tcp->add_option("--tensor", tensor_path, "tensor JSON file (with --q)");
    c_tcp->add_option("--q", q_json, "right-hand side as a JSON array, e.g. \"[-1,-1]\"");
    c_tcp->add_option("--tol", tol, "residual tolerance (default 1e-10)");
    c_tcp->add_option("--starts", starts);
    c_tcp->add_option("--seed", seed);
    c_tcp->add_option("-o,--out", out_path);

    auto* c_verify = app.add_subcommand("verify-bounds", "check both theorem chains plus lemma bounds");
    c_verify->add_option("tensor", tensor_path)->required();
    c_verify->add_option("--seed", seed);
    c_verify->add_option("--samples", samples, "operator-norm sample count");
    c_verify->add_option("--mode", mode)->check(CLI::IsMember({"grid", "heuristic"}));
    c_verify->add_option("--resolution", resolution);
    c_verify->add_option("-o,--out", out_path, "write the JSON report here");

    auto* c_gen = app.add_subcommand("gen", "generate a tensor from a seeded family");
    c_gen->add_option("--kind", kind_name,
                      "identity | diagonal-positive | identity-plus-perturbation | "
                      "symmetric-gaussian | diagonally-dominant")
        ->required();
    c_gen->add_option("--m", m_order)->required();
    c_gen->add_option("--n", n_dim)->required();
    c_gen->add_option("--seed", seed);
    c_gen->add_option("--lo", gp.lo);
    c_gen->add_option("--hi", gp.hi);
    c_gen->add_option("--epsilon", gp.epsilon);
    c_gen->add_option("--sigma", gp.sigma);
    c_gen->add_option("--scale", gp.scale);
    c_gen->add_option("-o,--out", out_path, "output tensor file")->required();

    auto* c_batch = app.add_subcommand("batch", "verify bounds over many generated instances");
    c_batch->add_option("--kind", kind_name)->required();
    c_batch->add_option("--m", m_order)->required();
    c_batch->add_option("--n", n_dim)->required();
    c_batch->add_option("--count", count)->required();
    c_batch->add_option("--seed", seed);
    c_batch->add_option("--lo", gp.lo);
    c_batch->add_option("--hi", gp.hi);
    c_batch->add_option("--epsilon", gp.epsilon);
    c_batch->add_option("--sigma", gp.sigma);
    c_batch->add_option("--scale", gp.scale);
    c_batch->add_option("--samples", samples);
    c_batch->add_option("-o,--out", out_path, "write the JSON report here");
    c_batch->add_option("--text-out", text_out, "write the text table here too");
    c_batch->add_option("--reproducer", reproducer, "violation dump path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*c_apply) {
            const Tensor a = read_tensor(tensor_path);
            const Vector x = read_vector(vector_path);
            std::cout << json(apply(a, x)).dump() << '\n';
            return 0;
        }

        if (*c_eig || *c_delta) {
            const Tensor a = read_tensor(tensor_path);
            EigConfig cfg = make_eig_config(seed, tol > 0 ? tol : 1e-9, starts > 0 ? starts : 200,
                                            method);
            json j;
            if (*c_eig) {
                if (eig_kind != "Z") j["h"] = eigenpairs_to_json(h_eigenpairs(a, cfg));
                if (eig_kind != "H") j["z"] = eigenpairs_to_json(z_eigenpairs(a, cfg));
            } else {
                j = delta_report_to_json(delta_report(a, cfg));
            }
            std::cout << j.dump(2) << '\n';
            if (!out_path.empty()) write_json_file(out_path, j);
            return 0;
        }

        if (*c_alpha) {
            const Tensor a = read_tensor(tensor_path);
            AlphaConfig cfg = make_alpha_config(mode, resolution, starts > 0 ? starts : 500, seed,
                                                tol > 0 ? tol : 1e-8);
            const AlphaResult r = (op == "T") ? alpha_t(a, cfg) : alpha_f(a, cfg);
            print_value(r.value);
            if (!out_path.empty()) write_json_file(out_path, alpha_result_to_json(r));
            return 0;
        }

        if (*c_checkp) {
            const Tensor a = read_tensor(tensor_path);
            AlphaConfig cfg = make_alpha_config(mode, resolution, starts > 0 ? starts : 500, seed,
                                                tol > 0 ? tol : 1e-8);
            const PVerdict v = classify(a, cfg);
            std::cout << verdict_to_json(v).dump(2) << '\n';
            if (!out_path.empty()) write_json_file(out_path, verdict_to_json(v));
            return 0;
        }

        if (*c_tcp) {
            TcpConfig cfg;
            if (tol > 0) cfg.tol = tol;
            if (starts > 0) cfg.starts = starts;
            cfg.seed = seed;
            std::optional<TcpInstance> inst;
            if (!instance_path.empty()) {
                inst = read_tcp_instance(instance_path);
            } else if (!tensor_path.empty() && !q_json.empty()) {
                json qj;
                try {
                    qj = json::parse(q_json);
                } catch (const json::exception& e) {
                    throw InputError(std::string("malformed --q: ") + e.what());
                }
                inst = TcpInstance(read_tensor(tensor_path), vector_from_json(qj));
            } else {
                throw InputError("tcp-solve needs an instance file, or --tensor with --q");
            }
            const TcpSolution sol = solve_tcp(*inst, cfg);
            std::cout << tcp_solution_to_json(sol).dump(2) << '\n';
            if (!out_path.empty()) write_json_file(out_path, tcp_solution_to_json(sol));
            return sol.converged ? 0 : 1;
        }

        if (*c_verify) {
            const Tensor a = read_tensor(tensor_path);
            BoundConfig cfg;
            cfg.seed = seed;
            cfg.norm_samples = samples;
            cfg.alpha = make_alpha_config(mode, resolution, 500, seed, 1e-8);
            const BoundReport rep = verify_bounds(a, cfg);
            std::cout << bound_report_to_text(rep);
            if (!out_path.empty()) write_json_file(out_path, bound_report_to_json(rep));
            return rep.any_violation ? 1 : 0;
        }

        if (*c_gen) {
            const Tensor a = gen_random(parse_kind_or_throw(kind_name), m_order, n_dim, seed, gp);
            write_tensor(out_path, a);
            return 0;
        }

        if (*c_batch) {
            GeneratorSpec spec;
            spec.kind = parse_kind_or_throw(kind_name);
            spec.m = m_order;
            spec.n = n_dim;
            spec.params = gp;
            spec.seed = seed;
            BoundConfig cfg;
            cfg.norm_samples = samples;
            const BatchReport rep = batch_experiment(spec, count, cfg, reproducer);
            const std::string table = batch_report_to_text(rep);
            std::cout << table;
            if (!out_path.empty()) write_json_file(out_path, batch_report_to_json(rep));
            if (!text_out.empty()) {
                std::ofstream f(text_out);
                if (!f) throw InputError("cannot write file: " + text_out);
                f << table;
            }
            return rep.violation_index ? 1 : 0;
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
