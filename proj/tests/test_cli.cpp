#include "cli.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

using namespace lpo_pi0;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = cli::run_cli(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir_ = fs::temp_directory_path() /
               ("lpo_pi0_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string write(const std::string& name, const std::string& text) const
    {
        const auto path = (dir_ / name).string();
        std::ofstream(path) << text;
        return path;
    }

    std::string write_values(const std::string& name, const std::vector<double>& values) const
    {
        std::string text;
        for (double v : values) text += json_number(v) + "\n";
        return write(name, text);
    }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<double> uniform_draws(std::uint64_t seed, std::size_t m)
{
    RandomStream rng(seed, 0);
    std::vector<double> v(m);
    for (auto& x : v) x = rng.uniform();
    return v;
}

const std::vector<double> fixture{0.01, 0.02, 0.5, 0.6, 0.9};

} // namespace

TEST_F(CliTest, EstimateMatchesLibrary)
{
    RandomStream rng(3, 0);
    const auto data = sample_beta_tail(0.8, 10.0, 400, rng);
    std::vector<double> values(data.sample.values().begin(), data.sample.values().end());
    const auto input = write_values("p.txt", values);

    const auto r = run({"estimate", "--input", input});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, to_json(estimate_pi0(load_sample(values), EstimatorConfig{})) + "\n");

    const auto loo = run({"estimate", "--input", input, "--method", "loo", "--nmax", "40"});
    EstimatorConfig cfg;
    cfg.method = Pi0Method::loo;
    cfg.n_max = 40;
    EXPECT_EQ(loo.out, to_json(estimate_pi0(load_sample(values), cfg)) + "\n");
}

TEST_F(CliTest, EstimateSsDelegates)
{
    const auto values = uniform_draws(8, 300);
    const auto input = write_values("p.txt", values);
    const auto r = run({"estimate", "--input", input, "--method", "ss", "--lambda", "0.5"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, to_json(ss_estimator(load_sample(values), 0.5)) + "\n");
    const auto doc = nlohmann::json::parse(r.out);
    EXPECT_TRUE(doc["n_hat"].is_null());
    EXPECT_EQ(doc["lambda_hat"], 0.5);
}

TEST_F(CliTest, EstimateCsvAndOutputFile)
{
    const auto input = write_values("p.txt", uniform_draws(9, 200));
    const auto out = path("est.csv");
    const auto r = run({"estimate", "--input", input, "--format", "csv", "--output", out});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    const auto text = slurp(out);
    EXPECT_EQ(text.rfind("method,m,pi0,pi0_raw,lambda_hat,mu_hat,n_hat,p_hat,risk\nlpo,200,", 0), 0u);
}

TEST_F(CliTest, EstimateUniformInputNearOne)
{
    int inside = 0;
    const int seeds = 40;
    for (int seed = 1; seed <= seeds; ++seed) {
        const auto input = write_values("u.txt", uniform_draws(static_cast<std::uint64_t>(seed), 1000));
        const auto r = run({"estimate", "--input", input});
        ASSERT_EQ(r.code, 0) << r.err;
        const double pi0 = nlohmann::json::parse(r.out)["pi0"].get<double>();
        if (pi0 >= 0.9 && pi0 <= 1.0) ++inside;
    }
    EXPECT_GE(inside, 38);
}

TEST_F(CliTest, DataErrorsCiteLines)
{
    const auto bad = write("bad.txt", "0.1\n0.2\n1.5\n0.3\n");
    const auto r = run({"estimate", "--input", bad});
    EXPECT_EQ(r.code, 3);
    const auto doc = nlohmann::json::parse(r.err);
    EXPECT_EQ(doc["error"], "OutOfRange");
    EXPECT_NE(doc["message"].get<std::string>().find("line 3"), std::string::npos);
    EXPECT_EQ(doc["exit_code"], 3);

    EXPECT_EQ(run({"estimate", "--input", path("missing.txt")}).code, 3);
    EXPECT_EQ(run({"estimate", "--input", write("one.txt", "0.5\n")}).code, 3);
    EXPECT_EQ(run({"estimate", "--input", write("empty.txt", "# none\n")}).code, 3);
}

TEST_F(CliTest, UsageErrors)
{
    const auto input = write_values("p.txt", fixture);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"estimate"}).code, 2);
    EXPECT_EQ(run({"estimate", "--input", input, "--method", "twilight"}).code, 2);
    EXPECT_EQ(run({"estimate", "--input", input, "--nmin", "5", "--nmax", "2"}).code, 2);
    EXPECT_EQ(run({"estimate", "--input", input, "--method", "ss", "--lambda", "1"}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(CliTest, MtpFixture)
{
    const auto input = write_values("p.txt", fixture);
    auto r = run({"mtp", "--input", input, "--alpha", "0.15", "--pi0", "1.0"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto doc = nlohmann::json::parse(r.out);
    EXPECT_EQ(doc["k_hat"], 2);
    EXPECT_EQ(r.out, to_json(bh_procedure(load_sample(fixture), 0.15)) + "\n");

    r = run({"mtp", "--input", input, "--alpha", "0.15", "--pi0", "0.5"});
    doc = nlohmann::json::parse(r.out);
    EXPECT_EQ(doc["k_hat"], 2);
    EXPECT_DOUBLE_EQ(doc["threshold"].get<double>(), 0.12);
    EXPECT_EQ(doc["rejected_indices"], nlohmann::json::array({0, 1}));

    r = run({"mtp", "--input", input, "--pi0", "0.5", "--one-based"});
    doc = nlohmann::json::parse(r.out);
    EXPECT_EQ(doc["rejected_indices"], nlohmann::json::array({1, 2}));
    EXPECT_EQ(doc["index_base"], 1);

    r = run({"mtp", "--input", input, "--alpha", "0"});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(nlohmann::json::parse(r.err)["error"], "InvalidAlpha");
    EXPECT_EQ(run({"mtp", "--input", input, "--delta", "-1"}).code, 2);
}

TEST_F(CliTest, MtpEstimatesPi0ByDefault)
{
    RandomStream rng(4, 0);
    const auto data = sample_beta_tail(0.6, 25.0, 500, rng);
    std::vector<double> values(500);
    for (std::size_t i = 0; i < values.size(); ++i) values[data.sample.original_index()[i]] = data.sample[i];
    const auto input = write_values("p.txt", values);
    const auto r = run({"mtp", "--input", input, "--delta", "0.01"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto sample = load_sample(values);
    EXPECT_EQ(r.out, to_json(plugin_mtp(sample, 0.15, estimate_pi0(sample, EstimatorConfig{}), 0.01)) + "\n");
}

TEST_F(CliTest, SimulateIsByteReproducible)
{
    const std::vector<std::string> base{"simulate", "--kind", "beta_tail", "--pi0", "0.7", "--s", "10", "--m", "300",
                                        "--reps", "2", "--seed", "5", "--nmax", "30"};
    auto first = base;
    first.insert(first.end(), {"--output", path("a")});
    auto second = base;
    second.insert(second.end(), {"--output", path("b")});
    ASSERT_EQ(run(first).code, 0);
    ASSERT_EQ(run(second).code, 0);
    EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
    EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
    EXPECT_FALSE(slurp(path("a.csv")).empty());
    const auto doc = nlohmann::json::parse(slurp(path("a.json")));
    EXPECT_EQ(doc["replicates"].size(), 2u);

    const auto printed = run(base);
    EXPECT_EQ(printed.out, slurp(path("a.csv")));
}

TEST_F(CliTest, SimulateConfigErrors)
{
    auto r = run({"simulate", "--kind", "gamma"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("beta_tail, trunc_beta, ushape"), std::string::npos);

    r = run({"simulate", "--scenario", write("bad.cfg", "kind = weibull\n")});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("beta_tail, trunc_beta, ushape"), std::string::npos);

    EXPECT_EQ(run({"simulate"}).code, 2);
    EXPECT_EQ(run({"simulate", "--kind", "ushape", "--alt-left", "1"}).code, 2);
    EXPECT_EQ(run({"simulate", "--kind", "beta_tail", "--methods", "lpo,twilight"}).code, 2);
}

TEST_F(CliTest, SimulateFlagsFailedReplicates)
{
    const auto r = run({"simulate", "--kind", "beta_tail", "--m", "100", "--reps", "2", "--methods", "ss",
                        "--procedures", "bh", "--lambda", "1.5"});
    EXPECT_EQ(r.code, 4);
    EXPECT_NE(r.out.find("# invalid"), std::string::npos);
    EXPECT_EQ(nlohmann::json::parse(r.err)["error"], "FailedReplicates");
}

TEST_F(CliTest, ShippedScenariosParse)
{
    const fs::path dir = LPO_PI0_SCENARIO_DIR;
    int files = 0;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() != ".cfg") continue;
        std::ifstream in(entry.path());
        const auto file = parse_scenario(in);
        EXPECT_NO_THROW(validate(file.spec)) << entry.path();
        ++files;
    }
    EXPECT_GE(files, 5);

    std::ifstream in(dir / "table1.cfg");
    const auto table1 = parse_scenario(in);
    EXPECT_EQ(table1.spec.kind, ScenarioKind::trunc_beta);
    EXPECT_EQ(table1.spec.lambda_star, 0.2);
    EXPECT_EQ(table1.spec.s, 4.0);
    EXPECT_EQ(table1.spec.pi0, 0.9);
    EXPECT_EQ(table1.spec.m, 1000);
    EXPECT_EQ(table1.spec.reps, 500);
}

TEST_F(CliTest, ScenarioFileWithOverrides)
{
    const auto cfg = write("s.cfg", "kind = ushape\npi0 = 0.7\nm = 200\nreps = 3\nmethods = lpo\nprocedures = bh\nnmax = 20\n");
    const auto r = run({"simulate", "--scenario", cfg, "--reps", "2", "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = nlohmann::json::parse(r.out);
    EXPECT_EQ(doc["scenario"]["kind"], "ushape");
    EXPECT_EQ(doc["scenario"]["reps"], 2);
    EXPECT_EQ(doc["scenario"]["pi0"], 0.7);
}

TEST_F(CliTest, RiskDebugSingleBin)
{
    const auto input = write_values("p.txt", uniform_draws(2, 37));
    const auto r = run({"risk-debug", "--input", input, "--N", "1", "--k", "0", "--l", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = nlohmann::json::parse(r.out);
    EXPECT_EQ(doc["risk"].get<double>(), -1.0);
    EXPECT_EQ(doc["N"], 1);
}

TEST_F(CliTest, RiskDebugFixture)
{
    const auto input = write_values("p.txt", {0.1, 0.2, 0.3, 0.7});
    const auto r = run({"risk-debug", "--input", input, "--N", "2", "--k", "0", "--l", "1", "--p", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = nlohmann::json::parse(r.out);
    EXPECT_NEAR(doc["risk"].get<double>(), -2.0 / 3.0, 1e-12);
    EXPECT_EQ(doc["p_hat"], 1);
    EXPECT_DOUBLE_EQ(doc["s"]["s11"].get<double>(), 2.0);
    EXPECT_DOUBLE_EQ(doc["s"]["s21"].get<double>(), 1.25);
}

TEST_F(CliTest, RiskDebugAll)
{
    const auto input = write_values("p.txt", uniform_draws(3, 50));
    const auto r = run({"risk-debug", "--input", input, "--all", "--limit", "10"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream lines(r.out);
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) {
        EXPECT_TRUE(nlohmann::json::parse(line).is_object());
        ++count;
    }
    EXPECT_EQ(count, 10);

    const auto every = run({"risk-debug", "--input", input, "--all", "--nmax", "5"});
    EXPECT_EQ(std::count(every.out.begin(), every.out.end(), '\n'), partition_count(1, 5));
    EXPECT_EQ(run({"risk-debug", "--input", input}).code, 2);
    EXPECT_EQ(run({"risk-debug", "--input", input, "--N", "2", "--k", "1", "--l", "1"}).code, 2);
    EXPECT_EQ(run({"risk-debug", "--input", input, "--N", "2", "--k", "0", "--l", "1", "--p", "50"}).code, 2);
}
