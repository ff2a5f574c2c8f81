// End-to-end checks of the command-line tool: exit codes, stdout contracts,
// and determinism of file outputs. Each test works in its own temp directory.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "ptensor/json_io.hpp"
#include "ptensor/tensor.hpp"

#ifndef PTENSOR_CLI_PATH
#error "PTENSOR_CLI_PATH must point at the built CLI binary"
#endif

namespace fs = std::filesystem;
using ptensor::json;

namespace {

struct CmdResult {
    int exit_code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("ptensor_cli_test_" + std::to_string(::getpid()) + "_" +
                ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    CmdResult run(const std::string& args) const {
        const fs::path out = dir_ / "stdout.txt";
        const fs::path err = dir_ / "stderr.txt";
        const std::string cmd = std::string(PTENSOR_CLI_PATH) + " " + args + " > " +
                                out.string() + " 2> " + err.string();
        const int rc = std::system(cmd.c_str());
        CmdResult r;
        r.exit_code = (rc >= 0 && WIFEXITED(rc)) ? WEXITSTATUS(rc) : -1;
        r.out = slurp(out);
        r.err = slurp(err);
        return r;
    }

    void write_identity(const std::string& name, int m, int n) const {
        ptensor::write_tensor(path(name), ptensor::unit_tensor(m, n));
    }

    fs::path dir_;
};

}  // namespace

TEST_F(CliTest, GenThenAlphaPrintsTheIdentityValue) {
    CmdResult g = run("gen --kind identity --m 4 --n 2 -o " + path("I.json"));
    ASSERT_EQ(g.exit_code, 0) << g.err;
    CmdResult a = run("alpha --op T " + path("I.json"));
    ASSERT_EQ(a.exit_code, 0) << a.err;
    EXPECT_EQ(a.out, "0.5\n");
    CmdResult f = run("alpha --op F " + path("I.json"));
    ASSERT_EQ(f.exit_code, 0);
    EXPECT_NEAR(std::stod(f.out), 1.0, 1e-6);
}

TEST_F(CliTest, ApplyPrintsTheImageVector) {
    write_identity("I.json", 4, 2);
    std::ofstream(path("x.json")) << "[1.0, 2.0]";
    CmdResult r = run("apply " + path("I.json") + " " + path("x.json"));
    ASSERT_EQ(r.exit_code, 0) << r.err;
    json v = json::parse(r.out);
    ASSERT_EQ(v.size(), 2u);
    EXPECT_NEAR(v[0].get<double>(), 1.0, 1e-12);
    EXPECT_NEAR(v[1].get<double>(), 8.0, 1e-12);
}

TEST_F(CliTest, EigReportsKnownSpectra) {
    std::ofstream(path("A.json"))
        << R"({"m": 2, "n": 2, "entries": [2.0, 1.0, 1.0, 2.0]})";
    CmdResult r = run("eig --kind H " + path("A.json"));
    ASSERT_EQ(r.exit_code, 0) << r.err;
    json j = json::parse(r.out);
    ASSERT_TRUE(j.contains("h"));
    ASSERT_EQ(j["h"].size(), 2u);
    EXPECT_NEAR(j["h"][0]["lambda"].get<double>(), 1.0, 1e-9);
    EXPECT_NEAR(j["h"][1]["lambda"].get<double>(), 3.0, 1e-9);
    EXPECT_FALSE(j.contains("z"));
}

TEST_F(CliTest, DeltaReportsBothConstants) {
    std::ofstream(path("D.json")) << R"({"m": 4, "n": 2, "entries": [2.0, 0, 0, 0, 0, 0, 0, 0,
                                                                     0, 0, 0, 0, 0, 0, 0, 3.0]})";
    CmdResult r = run("delta " + path("D.json"));
    ASSERT_EQ(r.exit_code, 0) << r.err;
    json j = json::parse(r.out);
    EXPECT_NEAR(j["delta_h"].get<double>(), 2.0, 1e-8);
    EXPECT_NEAR(j["delta_z"].get<double>(), 1.2, 1e-8);
    EXPECT_EQ(j["argmin_subset_z"], json::array({1, 2}));
}

TEST_F(CliTest, CheckPVerdicts) {
    write_identity("I.json", 4, 2);
    CmdResult r = run("check-p " + path("I.json"));
    ASSERT_EQ(r.exit_code, 0) << r.err;
    EXPECT_EQ(json::parse(r.out)["status"], "P");

    std::ofstream(path("neg.json"))
        << R"({"m": 2, "n": 2, "entries": [1.0, 0.0, 0.0, -1.0]})";
    CmdResult rn = run("check-p " + path("neg.json"));
    ASSERT_EQ(rn.exit_code, 0) << rn.err;
    json jn = json::parse(rn.out);
    EXPECT_EQ(jn["status"], "not-P0");
    ASSERT_FALSE(jn["witness"].is_null());
}

TEST_F(CliTest, TcpSolveInstanceFileAndInlineForms) {
    write_identity("I.json", 4, 2);
    std::ofstream(path("inst.json"))
        << R"({"tensor": ")" << path("I.json") << R"(", "q": [-1.0, -1.0]})";
    CmdResult r = run("tcp-solve " + path("inst.json"));
    ASSERT_EQ(r.exit_code, 0) << r.err;
    json j = json::parse(r.out);
    EXPECT_TRUE(j["converged"].get<bool>());
    EXPECT_NEAR(j["x"][0].get<double>(), 1.0, 1e-8);

    CmdResult r2 = run("tcp-solve --tensor " + path("I.json") + " --q \"[1.0, 2.0]\"");
    ASSERT_EQ(r2.exit_code, 0) << r2.err;
    EXPECT_NEAR(json::parse(r2.out)["x"][0].get<double>(), 0.0, 1e-10);
}

TEST_F(CliTest, VerifyBoundsTextAndJson) {
    write_identity("I.json", 4, 2);
    CmdResult r = run("verify-bounds " + path("I.json") + " -o " + path("report.json"));
    ASSERT_EQ(r.exit_code, 0) << r.err;
    EXPECT_NE(r.out.find("alpha_T"), std::string::npos);
    json j = ptensor::read_json_file(path("report.json"));
    EXPECT_FALSE(j["any_violation"].get<bool>());
}

TEST_F(CliTest, BatchWritesDeterministicReports) {
    const std::string args = "batch --kind identity-plus-perturbation --m 4 --n 2 --count 3"
                             " --seed 11 --samples 100 -o ";
    CmdResult r1 = run(args + path("r1.json") + " --reproducer " + path("repro1.json"));
    ASSERT_EQ(r1.exit_code, 0) << r1.err;
    CmdResult r2 = run(args + path("r2.json") + " --reproducer " + path("repro2.json"));
    ASSERT_EQ(r2.exit_code, 0) << r2.err;
    EXPECT_EQ(slurp(path("r1.json")), slurp(path("r2.json")));
    EXPECT_NE(r1.out.find("processed 3/3"), std::string::npos);
}

TEST_F(CliTest, MissingFileExitsTwo) {
    CmdResult r = run("alpha --op T " + path("nope.json"));
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.err.find("error"), std::string::npos);
}

TEST_F(CliTest, MalformedJsonExitsTwo) {
    std::ofstream(path("bad.json")) << "{ not json";
    EXPECT_EQ(run("alpha --op T " + path("bad.json")).exit_code, 2);

    std::ofstream(path("short.json")) << R"({"m": 2, "n": 2, "entries": [1, 2, 3]})";
    EXPECT_EQ(run("eig " + path("short.json")).exit_code, 2);

    std::ofstream(path("nan.json")) << R"({"m": 2, "n": 1, "entries": [null]})";
    EXPECT_EQ(run("eig " + path("nan.json")).exit_code, 2);
}

TEST_F(CliTest, BadUsageExitsTwo) {
    EXPECT_EQ(run("no-such-subcommand").exit_code, 2);
    EXPECT_EQ(run("alpha").exit_code, 2);                      // missing tensor
    EXPECT_EQ(run("alpha --op Q x.json").exit_code, 2);        // bad enum value
    EXPECT_EQ(run("gen --kind identity --m 4").exit_code, 2);  // missing required
}

TEST_F(CliTest, GenIsDeterministicAcrossInvocations) {
    const std::string args = "gen --kind symmetric-gaussian --m 3 --n 3 --seed 99 -o ";
    ASSERT_EQ(run(args + path("a.json")).exit_code, 0);
    ASSERT_EQ(run(args + path("b.json")).exit_code, 0);
    EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
    ptensor::Tensor a = ptensor::read_tensor(path("a.json"));
    EXPECT_EQ(a.order(), 3);
    EXPECT_EQ(a.dim(), 3);
}

TEST_F(CliTest, EigWritesTheSameJsonToFileAndStdout) {
    write_identity("I.json", 4, 2);
    CmdResult r = run("eig " + path("I.json") + " -o " + path("eig.json"));
    ASSERT_EQ(r.exit_code, 0) << r.err;
    json from_stdout = json::parse(r.out);
    json from_file = ptensor::read_json_file(path("eig.json"));
    EXPECT_EQ(from_stdout.dump(), from_file.dump());
}
