#include <cmath>
#include <cstdio>
#include <filesystem>

#include <gtest/gtest.h>

#include "ptensor/bounds.hpp"
#include "ptensor/classify.hpp"
#include "ptensor/generate.hpp"
#include "ptensor/json_io.hpp"
#include "ptensor/tcp.hpp"
#include "test_support.hpp"

using namespace ptensor;
using testsup::diag_tensor;
using testsup::matrix_tensor;

namespace {

const Inequality* find_ineq(const std::vector<Inequality>& v, std::size_t k) {
    return k < v.size() ? &v[k] : nullptr;
}

}  // namespace

TEST(BoundsTest, IdentityChainsAreEqualitiesWithinGap) {
    // alpha(F_I) = delta_H(I)^{1/3} = 1 and alpha(T_I) = delta_Z(I) = 1/2 at
    // n = 2, m = 4: both chains bind, so outcomes land in holds-within-gap
    // territory rather than strict holds.
    Tensor id = unit_tensor(4, 2);
    BoundReport r = verify_bounds(id);
    EXPECT_FALSE(r.any_violation);

    ASSERT_EQ(r.chain_f.size(), 2u);
    for (const auto& q : r.chain_f) {
        EXPECT_NE(q.outcome, Outcome::violated) << q.name;
        EXPECT_NEAR(q.margin, 0.0, 1e-6) << q.name;
    }
    ASSERT_EQ(r.chain_t.size(), 2u);
    EXPECT_NEAR(r.alpha_t.value, 0.5, 1e-6);
    ASSERT_TRUE(r.alpha_f.has_value());
    EXPECT_NEAR(r.alpha_f->value, 1.0, 1e-6);
    ASSERT_TRUE(r.delta.delta_h.has_value());
    EXPECT_NEAR(*r.delta.delta_h, 1.0, 1e-8);
    ASSERT_TRUE(r.delta.delta_z.has_value());
    EXPECT_NEAR(*r.delta.delta_z, 0.5, 1e-8);
    EXPECT_NEAR(r.min_diag, 1.0, 0.0);
}

TEST(BoundsTest, DiagonalExampleChainTen) {
    // diag(2,3), m = 4: alpha_T <= delta_Z = 6/5 <= min diag = 2, with slack
    // in the second link.
    Tensor a = diag_tensor(4, {2.0, 3.0});
    BoundReport r = verify_bounds(a);
    EXPECT_FALSE(r.any_violation);
    ASSERT_TRUE(r.delta.delta_z.has_value());
    EXPECT_NEAR(*r.delta.delta_z, 1.2, 1e-8);
    EXPECT_NEAR(r.min_diag, 2.0, 0.0);
    const Inequality* second = find_ineq(r.chain_t, 1);
    ASSERT_NE(second, nullptr);
    EXPECT_EQ(second->outcome, Outcome::holds);
    EXPECT_NEAR(second->margin, 0.8, 1e-8);
}

TEST(BoundsTest, MatrixExampleBothChains) {
    Tensor a = matrix_tensor(2, {2.0, 1.0, 1.0, 2.0});
    BoundReport r = verify_bounds(a);
    EXPECT_FALSE(r.any_violation);
    // m = 2: exponent 1/(m-1) is the identity, delta_H = 1, min diag = 2
    const Inequality* q = find_ineq(r.chain_f, 1);
    ASSERT_NE(q, nullptr);
    EXPECT_EQ(q->outcome, Outcome::holds);
    EXPECT_NEAR(q->margin, 1.0, 1e-8);
}

TEST(BoundsTest, OddOrderSkipsTheEvenOnlyChain) {
    Tensor a = unit_tensor(3, 2);
    BoundReport r = verify_bounds(a);
    for (const auto& q : r.chain_f) EXPECT_EQ(q.outcome, Outcome::not_applicable);
    // chain_t is still evaluated
    ASSERT_EQ(r.chain_t.size(), 2u);
    EXPECT_FALSE(r.alpha_f.has_value());
    EXPECT_FALSE(r.bounded_f.has_value());
}

TEST(BoundsTest, MonotonicityEntriesCoverAllProperSubsets) {
    Tensor a = gen_random(GenKind::identity_plus_perturbation, 4, 3, 14000, GenParams{});
    BoundReport r = verify_bounds(a);
    // 2^3 - 2 proper nonempty subsets
    EXPECT_EQ(r.monotonicity_t.size(), 6u);
    EXPECT_EQ(r.monotonicity_f.size(), 6u);
    for (const auto& q : r.monotonicity_t) {
        EXPECT_NE(q.outcome, Outcome::violated) << q.name;
        EXPECT_GE(q.margin, -1e-6) << q.name;
    }
}

TEST(BoundsTest, SampledNormCheckHoldsWithTightTolerance) {
    for (int trial = 0; trial < 3; ++trial) {
        Tensor a = gen_random(GenKind::symmetric_gaussian, 4, 3, 14100 + trial, GenParams{});
        BoundReport r = verify_bounds(a);
        EXPECT_NE(r.sampled_t.outcome, Outcome::violated);
        EXPECT_GE(r.sampled_t.margin, -1e-10);
        ASSERT_TRUE(r.sampled_f.has_value());
        EXPECT_NE(r.sampled_f->outcome, Outcome::violated);
    }
}

TEST(BoundsTest, PFixturesNeverViolate) {
    for (int trial = 0; trial < 5; ++trial) {
        const int n = 2 + trial % 2;
        Tensor a = gen_random(GenKind::identity_plus_perturbation, 4, n, 14200 + trial,
                              GenParams{});
        BoundReport r = verify_bounds(a);
        EXPECT_FALSE(r.any_violation) << "trial=" << trial;
    }
}

TEST(BoundsTest, ReportSerializesAndIsDeterministic) {
    Tensor a = gen_random(GenKind::diagonally_dominant, 4, 2, 14300, GenParams{});
    BoundReport r1 = verify_bounds(a);
    BoundReport r2 = verify_bounds(a);
    EXPECT_EQ(bound_report_to_json(r1).dump(), bound_report_to_json(r2).dump());
    const std::string text = bound_report_to_text(r1);
    EXPECT_NE(text.find("alpha_T"), std::string::npos);
    EXPECT_NE(text.find("holds"), std::string::npos);
}

TEST(BoundsTest, BatchAggregatesAndHonorsZeroCount) {
    GeneratorSpec spec;
    spec.kind = GenKind::identity_plus_perturbation;
    spec.m = 4;
    spec.n = 2;
    spec.seed = 600;
    BatchReport empty = batch_experiment(spec, 0);
    EXPECT_EQ(empty.count_processed, 0);
    EXPECT_FALSE(empty.alpha_t_min.has_value());

    BatchReport r = batch_experiment(spec, 4);
    EXPECT_EQ(r.count_processed, 4);
    EXPECT_FALSE(r.violation_index.has_value());
    ASSERT_TRUE(r.alpha_t_min && r.alpha_t_mean);
    EXPECT_LE(*r.alpha_t_min, *r.alpha_t_mean + 1e-15);
    EXPECT_GT(*r.alpha_t_min, 0.0);
    const std::string text = batch_report_to_text(r);
    EXPECT_NE(text.find("processed 4/4"), std::string::npos);
    EXPECT_NE(text.find("alpha_T min/mean"), std::string::npos);
}

TEST(BoundsTest, BatchDropsAReproducerOnViolation) {
    // Gaussian tensors routinely break the alpha_T <= delta_Z link (they are
    // nowhere near P-tensors), which is exactly what the halt-and-reproduce
    // path is for.
    const std::string repro = "bounds_test_reproducer.json";
    std::filesystem::remove(repro);
    GeneratorSpec spec;
    spec.kind = GenKind::symmetric_gaussian;
    spec.m = 4;
    spec.n = 2;
    spec.seed = 15000;
    BatchReport r = batch_experiment(spec, 40, BoundConfig{}, repro);
    if (r.violation_index.has_value()) {
        EXPECT_EQ(r.count_processed, *r.violation_index + 1);
        ASSERT_TRUE(std::filesystem::exists(repro));
        json j = read_json_file(repro);
        EXPECT_EQ(j.at("index").get<int>(), *r.violation_index);
        // the reproducer regenerates bit-identically from its recorded seed
        Tensor again = gen_random(spec.kind, spec.m, spec.n,
                                  j.at("seed").get<std::uint64_t>(), spec.params);
        EXPECT_EQ(tensor_from_json(j.at("tensor")).entries(), again.entries());
        std::filesystem::remove(repro);
    } else {
        GTEST_SKIP() << "no violation in 40 gaussian instances";
    }
}

TEST(BoundsTest, TensorJsonRoundTripIsBitExact) {
    Tensor a = gen_random(GenKind::symmetric_gaussian, 3, 3, 15100, GenParams{});
    json j = tensor_to_json(a);
    Tensor b = tensor_from_json(j);
    EXPECT_EQ(a.entries(), b.entries());

    // through a file as well
    const std::string path = "bounds_test_roundtrip.json";
    write_tensor(path, a);
    Tensor c = read_tensor(path);
    EXPECT_EQ(a.entries(), c.entries());
    std::filesystem::remove(path);

    // awkward values survive
    Tensor t(2, 2, {0.1, 1.0 / 3.0, -2.2250738585072014e-308, 12345.6789012345678});
    EXPECT_EQ(tensor_from_json(tensor_to_json(t)).entries(), t.entries());
}

TEST(BoundsTest, MalformedTensorJsonIsRejected) {
    EXPECT_THROW(tensor_from_json(json::parse(R"({"m":2,"n":2,"entries":[1,2,3]})")), InputError);
    EXPECT_THROW(tensor_from_json(json::parse(R"({"m":2,"entries":[1,2,3,4]})")), InputError);
    EXPECT_THROW(tensor_from_json(json::parse(R"({"m":2,"n":2,"entries":[1,2,3,"x"]})")),
                 InputError);
    EXPECT_THROW(tensor_from_json(json::parse(R"([1,2,3,4])")), InputError);
    EXPECT_THROW(read_tensor("no_such_file_anywhere.json"), InputError);
}

TEST(BoundsTest, VerdictAndSolutionSerialization) {
    Tensor a = diag_tensor(4, {1.0, -1.0});
    PVerdict v = classify(a);
    json jv = verdict_to_json(v);
    EXPECT_EQ(jv.at("status").get<std::string>(), "not-P0");
    ASSERT_FALSE(jv.at("witness").is_null());

    TcpSolution s = solve_tcp(TcpInstance(unit_tensor(4, 2), {-1.0, -1.0}));
    json js = tcp_solution_to_json(s);
    EXPECT_TRUE(js.at("converged").get<bool>());
    EXPECT_EQ(js.at("x").size(), 2u);
    EXPECT_LE(js.at("residual").get<double>(), 1e-10);
}

TEST(BoundsTest, TcpInstanceJsonBothShapes) {
    // inline tensor
    json inl = {{"tensor", {{"m", 2}, {"n", 2}, {"entries", {2.0, 0.0, 0.0, 2.0}}}},
                {"q", {-2.0, 4.0}}};
    TcpInstance inst = tcp_instance_from_json(inl);
    EXPECT_EQ(inst.a.dim(), 2);
    EXPECT_EQ(inst.q[0], -2.0);

    // tensor by file reference
    const std::string tpath = "bounds_test_tcp_tensor.json";
    write_tensor(tpath, unit_tensor(4, 2));
    json ref = {{"tensor", tpath}, {"q", {1.0, 1.0}}};
    TcpInstance inst2 = tcp_instance_from_json(ref);
    EXPECT_EQ(inst2.a.order(), 4);
    std::filesystem::remove(tpath);

    EXPECT_THROW(tcp_instance_from_json(json{{"q", {1.0}}}), InputError);
}
