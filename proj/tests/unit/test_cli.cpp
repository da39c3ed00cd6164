#include "serrin/cli.hpp"

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "serrin");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = serrin::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<double>> parse_csv(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::istringstream is(text);
    std::string line;
    std::getline(is, line);
    while (std::getline(is, line)) {
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("serrin_cli_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

} // namespace

TEST(Cli, SigmaDegreeOneIsMinusOne) {
    const Result r = run({"sigma", "--dim", "2", "--j", "1", "--lambda", "0.1:1.4:14"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 14u);
    for (const auto& row : rows) EXPECT_NEAR(row[1], -1.0, 1e-9);
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "lambda,sigma_j,f_j,bound_lo,bound_hi");
    EXPECT_EQ(r.out.find('\r'), std::string::npos);
}

TEST(Cli, SigmaDegreeZeroAndBounds) {
    const Result r0 = run({"sigma", "--dim", "2", "--j", "0", "--lambda", "0.4:0.4:1"});
    ASSERT_EQ(r0.code, 0);
    EXPECT_NEAR(parse_csv(r0.out)[0][1], -1.0 / (std::cos(0.4) * std::cos(0.4)), 1e-12);
    const Result r2 = run({"sigma", "--dim", "3", "--j", "2", "--lambda", "0.5:0.5:1", "--route", "riccati"});
    ASSERT_EQ(r2.code, 0);
    const auto row = parse_csv(r2.out)[0];
    EXPECT_LE(row[3], row[2]);
    EXPECT_LE(row[2], row[4]);
}

TEST(Cli, OutputIsByteIdenticalAcrossRuns) {
    const std::vector<std::string> args{"sigma", "--dim", "4", "--j", "5", "--lambda", "0.05:1.5:31"};
    EXPECT_EQ(run(args).out, run(args).out);
    EXPECT_EQ(run({"bifpoints", "--dim", "3", "--jmax", "6"}).out, run({"bifpoints", "--dim", "3", "--jmax", "6"}).out);
}

TEST(Cli, Bifpoints) {
    const Result r = run({"bifpoints", "--dim", "2", "--jmax", "8"});
    ASSERT_EQ(r.code, 0);
    const auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 7u);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_GT(rows[i][2], 0.0);
        if (i) EXPECT_LT(rows[i][1], rows[i - 1][1]);
    }
    const Result one = run({"bifpoints", "--dim", "3", "--jmax", "2"});
    ASSERT_EQ(one.code, 0);
    EXPECT_EQ(parse_csv(one.out).size(), 1u);
    EXPECT_EQ(run({"bifpoints", "--dim", "2", "--jmax", "1"}).code, 2);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"sigma", "--dim", "2", "--j", "2"}).code, 2);
    EXPECT_EQ(run({"sigma", "--dim", "2", "--j", "2", "--lambda", "0.1:0.2"}).code, 2);
    EXPECT_EQ(run({"sigma", "--dim", "2", "--j", "2", "--lambda", "0.1:1.7:3"}).code, 2);
    EXPECT_EQ(run({"sigma", "--dim", "2", "--j", "2", "--lambda", "0.5:0.5:1", "--route", "euler"}).code, 2);
    EXPECT_EQ(run({"check", "--tol", "-1"}).code, 2);
    const Result num = run({"sigma", "--dim", "3", "--j", "2", "--lambda", "1:1:1", "--route", "riccati", "--ode-abs", "1e-30",
                            "--ode-rel", "1e-30"});
    EXPECT_EQ(num.code, 3);
    EXPECT_NE(num.err.find("numerical failure"), std::string::npos);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, CoarseCheckSkipsOrdersButPasses) {
    const Result r = run({"check", "--n-alpha", "16", "--n-t", "16"});
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.err.find("warning"), std::string::npos);
    EXPECT_NE(r.out.find("SKIP pde: convergence order"), std::string::npos);
    EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST(Cli, SolveAndLinop) {
    const Result s = run({"solve", "--dim", "2", "--lambda", "0.8", "--grids", "32,64"});
    ASSERT_EQ(s.code, 0) << s.err;
    const auto rows = parse_csv(s.out);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_GE(rows[1][5], 1.8);
    EXPECT_GE(rows[1][6], 1.8);
    const Result l = run({"linop", "--dim", "3", "--j", "2", "--lambda", "0.5", "--n-alpha", "32", "--n-t", "32"});
    ASSERT_EQ(l.code, 0) << l.err;
    for (const auto& row : parse_csv(l.out)) EXPECT_LE(std::abs(row[3]), 1e-2);
}

TEST(Cli, BranchWritesJsonAndBoundaryFiles) {
    const fs::path dir = scratch("branch");
    const Result r = run({"branch", "--dim", "2", "--j", "2", "--smax", "0.02", "--steps", "2", "--M", "6", "--n-alpha", "32",
                          "--n-t", "32", "--out-dir", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    std::ifstream f(dir / "branch.json");
    const auto j = nlohmann::json::parse(f);
    EXPECT_EQ(j["status"], "complete");
    ASSERT_EQ(j["points"].size(), 5u);
    for (const auto& p : j["points"]) EXPECT_TRUE(fs::exists(dir / p["boundary_csv"].get<std::string>()));
    for (const auto& e : fs::directory_iterator(dir)) EXPECT_NE(e.path().extension(), ".tmp");

    const fs::path big = scratch("branch_big");
    const Result t = run({"branch", "--dim", "2", "--j", "2", "--smax", "1.5", "--steps", "3", "--M", "6", "--n-alpha", "32",
                          "--n-t", "32", "--out-dir", big.string()});
    ASSERT_EQ(t.code, 0);
    std::ifstream g(big / "branch.json");
    EXPECT_EQ(nlohmann::json::parse(g)["status"].get<std::string>().rfind("stopped_at_s=", 0), 0u);
}

TEST(Cli, ExportDomain) {
    const fs::path dir = scratch("export");
    const Result r = run({"export-domain", "--dim", "2", "--lambda", "0.6", "--coeffs", "0,0,0.02", "--n-alpha", "16", "--n-t",
                          "16", "--out", (dir / "d.json").string(), "--field", (dir / "u.csv").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    std::ifstream f(dir / "d.json");
    const auto j = nlohmann::json::parse(f);
    EXPECT_EQ(j["phi"].size(), 16u);
    EXPECT_EQ(j["neumann"].size(), 16u);
    std::ifstream u(dir / "u.csv");
    std::string header;
    std::getline(u, header);
    EXPECT_EQ(header, "alpha,t,value");
    EXPECT_EQ(run({"export-domain", "--dim", "2", "--lambda", "1.5", "--coeffs", "0,0,0.5"}).code, 2);
}

TEST(Cli, ConfigFileWithFlagOverride) {
    const fs::path dir = scratch("config");
    {
        std::ofstream c(dir / "run.toml");
        c << "[sigma]\ndim = 2\nj = 1\nlambda = \"0.2:0.2:1\"\n";
    }
    const Result a = run({"--config", (dir / "run.toml").string(), "sigma"});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_NEAR(parse_csv(a.out)[0][1], -1.0, 1e-9);
    const Result b = run({"--config", (dir / "run.toml").string(), "sigma", "--j", "0"});
    ASSERT_EQ(b.code, 0);
    EXPECT_NEAR(parse_csv(b.out)[0][1], -1.0 / (std::cos(0.2) * std::cos(0.2)), 1e-12);
    EXPECT_EQ(run({"--config", (dir / "missing.toml").string(), "sigma"}).code, 2);
}
