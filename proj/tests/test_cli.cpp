#include "commands.hpp"
#include "output.hpp"
#include "run_config.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace dwell;
using namespace dwell::cli;

namespace {

std::string read_file(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string canonical_text() { return read_file(DWELL_CANONICAL_CONFIG); }

nlohmann::json canonical_json() { return nlohmann::json::parse(canonical_text()); }

std::string expect_config_error(const nlohmann::json& doc)
{
    try {
        parse_config(doc.dump());
    } catch (const ConfigError& e) {
        return e.what();
    }
    ADD_FAILURE() << "config accepted: " << doc.dump();
    return {};
}

class CliRun : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir_ = std::filesystem::temp_directory_path() /
               ("dwell_cli_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
                ::testing::UnitTest::GetInstance()->current_test_info()->name());
        std::filesystem::remove_all(dir_);
        std::filesystem::create_directories(dir_);
    }
    void TearDown() override { std::filesystem::remove_all(dir_); }

    int run(const std::string& args)
    {
        const std::string cmd = std::string(DWELL_CLI_PATH) + " " + args + " > " + (dir_ / "stdout.txt").string() +
                                " 2> " + (dir_ / "stderr.txt").string();
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    std::filesystem::path dir_;
};

} // namespace

TEST(Config, ParsesCanonical)
{
    const RunConfig c = parse_config(canonical_text());
    EXPECT_EQ(c.n_max, 6);
    EXPECT_EQ(c.N, 2);
    EXPECT_DOUBLE_EQ(c.model.lambda, 0.05);
    EXPECT_DOUBLE_EQ(c.mu, 2.0);
    EXPECT_EQ(c.G(0, 3), Complex(0.3, 0.0));
    EXPECT_EQ(c.G(2, 1), Complex(0.1, 0.0));
    EXPECT_EQ(c.scenario, "compare-all");
    EXPECT_EQ(c.default_command(), "compare");
    EXPECT_EQ(c.limits().size(), 2u);
    ASSERT_TRUE(c.noise.has_value());
    EXPECT_EQ(c.noise->trajectories, 1000);
    EXPECT_EQ(c.text, canonical_text());
    EXPECT_EQ(c.grid().size(), 11u);
}

TEST(Config, ScenarioSelectsLimitAndCommand)
{
    auto doc = canonical_json();
    doc["scenario"] = "evolve-singular";
    RunConfig c = parse_config(doc.dump());
    EXPECT_EQ(c.default_command(), "evolve");
    ASSERT_EQ(c.limits().size(), 1u);
    EXPECT_EQ(c.limits()[0], Limit::Singular);

    doc["scenario"] = "slope-weak";
    c = parse_config(doc.dump());
    EXPECT_EQ(c.default_command(), "slope");
    EXPECT_EQ(c.limits()[0], Limit::Weak);

    doc["scenario"] = "unravel";
    EXPECT_EQ(parse_config(doc.dump()).default_command(), "unravel");
    doc.erase("noise");
    EXPECT_NE(expect_config_error(doc).find("noise"), std::string::npos);
}

TEST(Config, RejectsUnknownKeys)
{
    auto doc = canonical_json();
    doc["extra"] = 1;
    EXPECT_NE(expect_config_error(doc).find("extra"), std::string::npos);

    doc = canonical_json();
    doc["model"]["Tee"] = 0.1;
    EXPECT_NE(expect_config_error(doc).find("model.Tee"), std::string::npos);

    doc = canonical_json();
    doc["environment"]["G"]["imag"] = doc["environment"]["G"]["re"];
    EXPECT_NE(expect_config_error(doc).find("environment.G.imag"), std::string::npos);
}

TEST(Config, RejectsInvalidValues)
{
    auto doc = canonical_json();
    doc["model"].erase("U");
    EXPECT_NE(expect_config_error(doc).find("model.U"), std::string::npos);

    doc = canonical_json();
    doc["model"]["U"] = "one";
    expect_config_error(doc);

    doc = canonical_json();
    doc["scenario"] = "everything";
    expect_config_error(doc);

    doc = canonical_json();
    doc["initial_state"]["N"] = 6;
    expect_config_error(doc);

    doc = canonical_json();
    doc["basis"]["n_max"] = 2.5;
    expect_config_error(doc);

    doc = canonical_json();
    doc["environment"]["kind"] = "gaussian";
    expect_config_error(doc);

    doc = canonical_json();
    doc["environment"]["mu"] = 0.0;
    expect_config_error(doc);

    doc = canonical_json();
    doc["environment"]["G"]["re"][0] = {1.0, 0.0, 0.0};
    expect_config_error(doc);

    doc = canonical_json();
    doc["time_grid"]["points"] = 1;
    expect_config_error(doc);

    doc = canonical_json();
    doc["seed"] = -4;
    expect_config_error(doc);

    doc = canonical_json();
    doc["noise"]["channels"] = {true, false};
    expect_config_error(doc);

    EXPECT_THROW(parse_config("{ not json"), ConfigError);
    EXPECT_THROW(load_config("/nonexistent/dwell.json"), ConfigError);
}

TEST(Output, NumberFormat)
{
    EXPECT_EQ(format_number(0.1), "0.10000000000000001");
    EXPECT_EQ(format_number(0.0), "0");
    EXPECT_EQ(format_number(1e-3), "0.001");
    EXPECT_EQ(format_number(-2.5e-17), "-2.4999999999999999e-17");
    EXPECT_EQ(std::stod(format_number(2.0357102751263336e-3)), 2.0357102751263336e-3);
}

TEST(Output, JsonDump)
{
    nlohmann::json doc = {{"b", 0.1}, {"a", {1, 2}}, {"c", {{"x", true}, {"y", "s"}}}, {"n", NAN}};
    const std::string text = dump_json(doc);
    EXPECT_NE(text.find("\"b\": 0.10000000000000001"), std::string::npos);
    EXPECT_NE(text.find("\"n\": null"), std::string::npos);
    EXPECT_LT(text.find("\"a\""), text.find("\"b\""));
    const auto back = nlohmann::json::parse(text);
    EXPECT_EQ(back["b"].get<double>(), 0.1);
    EXPECT_EQ(back["c"]["y"], "s");
}

TEST(Output, TrajectoryCsv)
{
    Trajectory t;
    t.times = {0.0, 0.5};
    t.observable_names = {"J"};
    t.values = {{Complex(0.0), Complex(0.25)}};
    t.trace_dev = {0.0, 1e-16};
    t.min_eig = {0.0, -1e-18};
    t.leakage = {0.0, 1e-9};
    const std::string csv = trajectory_csv(t);
    EXPECT_EQ(csv, "t,J,trace_dev,min_eig,leakage\n0,0,0,0,0\n0.5,0.25,9.9999999999999998e-17,-1.0000000000000001e-18,"
                   "1.0000000000000001e-09\n");
    const std::vector<double> se{0.0, 0.125};
    EXPECT_EQ(trajectory_csv(t, &se).substr(0, 37), "t,J,trace_dev,min_eig,leakage,stderr\n");
    const std::vector<double> wrong{0.0};
    EXPECT_THROW(trajectory_csv(t, &wrong), std::invalid_argument);
}

TEST(CompareSuite, CanonicalPasses)
{
    bool all_pass = false;
    const auto checks = compare_suite(parse_config(canonical_text()), all_pass);
    EXPECT_TRUE(all_pass);
    EXPECT_EQ(checks["weak_slope_identity"]["cases"].size(), 11u);
    EXPECT_EQ(checks["singular_slope_identity"]["cases"].size(), 6u);
    EXPECT_EQ(checks["null_results"]["cases"].size(), 4u);
    EXPECT_LT(checks["weak_slope_identity"]["cases"][0]["rel_deviation"].get<double>(), 1e-10);
    EXPECT_LT(checks["singular_slope_identity"]["cases"][0]["rel_deviation"].get<double>(), 1e-10);
}

TEST_F(CliRun, MissingConfigNamesPath)
{
    EXPECT_EQ(run("compare --config /nonexistent/run.json --out " + dir_.string()), kValidation);
    EXPECT_NE(read_file(dir_ / "stderr.txt").find("/nonexistent/run.json"), std::string::npos);
    EXPECT_EQ(run("compare --out " + dir_.string()), kValidation);
}

TEST_F(CliRun, UnknownKeyIsValidationError)
{
    auto doc = canonical_json();
    doc["model"]["bogus"] = 1;
    const auto path = dir_ / "bad.json";
    std::ofstream(path) << doc.dump();
    EXPECT_EQ(run("slope --config " + path.string() + " --out " + dir_.string()), kValidation);
    EXPECT_NE(read_file(dir_ / "stderr.txt").find("model.bogus"), std::string::npos);
}

TEST_F(CliRun, ComplexGInSingularLimitIsValidationError)
{
    auto doc = canonical_json();
    doc["scenario"] = "slope-singular";
    doc["environment"]["G"]["im"] = {{0, 0, 0.1, 0}, {0, 0, 0, 0}, {-0.1, 0, 0, 0}, {0, 0, 0, 0}};
    const auto path = dir_ / "complex.json";
    std::ofstream(path) << doc.dump();
    EXPECT_EQ(run("--config " + path.string() + " --out " + dir_.string()), kValidation);
}

TEST_F(CliRun, CompareCanonical)
{
    const auto out = dir_ / "out";
    EXPECT_EQ(run("compare --config " DWELL_CANONICAL_CONFIG " --out " + out.string() + " --quiet"), kOk);
    const auto doc = nlohmann::json::parse(read_file(out / "compare.json"));
    EXPECT_TRUE(doc["all_pass"].get<bool>());
    EXPECT_EQ(doc["config_text"], canonical_text());
    EXPECT_FALSE(doc["build_id"].get<std::string>().empty());
    EXPECT_TRUE(read_file(dir_ / "stdout.txt").empty());
}

TEST_F(CliRun, EvolveCsvContract)
{
    const auto out = dir_ / "out";
    EXPECT_EQ(run("evolve --config " DWELL_CANONICAL_CONFIG " --out " + out.string()), kOk);
    for (const char* stem : {"evolve_weak", "evolve_singular"}) {
        std::ifstream csv(out / (std::string(stem) + ".csv"));
        std::string header;
        std::string first;
        std::getline(csv, header);
        std::getline(csv, first);
        EXPECT_EQ(header, "t,J,trace_dev,min_eig,leakage");
        EXPECT_EQ(first.substr(0, 2), "0,");
        const auto diag = nlohmann::json::parse(read_file(out / (std::string(stem) + ".json")));
        EXPECT_EQ(diag["flagged_points"].get<int>(), 0);
    }
}

TEST_F(CliRun, SlopeAndSeedOverride)
{
    const auto a = dir_ / "a";
    const auto b = dir_ / "b";
    EXPECT_EQ(run("slope --config " DWELL_CANONICAL_CONFIG " --out " + a.string() + " --seed 5"), kOk);
    EXPECT_EQ(run("slope --config " DWELL_CANONICAL_CONFIG " --out " + b.string() + " --seed 6"), kOk);
    const auto ja = nlohmann::json::parse(read_file(a / "slope.json"));
    const auto jb = nlohmann::json::parse(read_file(b / "slope.json"));
    EXPECT_EQ(ja["seed"].get<std::uint64_t>(), 5u);
    EXPECT_EQ(jb["seed"].get<std::uint64_t>(), 6u);
    EXPECT_EQ(ja["reports"]["weak"]["numeric"], jb["reports"]["weak"]["numeric"]);
    EXPECT_TRUE(ja["reports"]["singular"]["pass"].get<bool>());
}
