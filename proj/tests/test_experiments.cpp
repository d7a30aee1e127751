#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "greedylab/experiments.hpp"

using namespace greedylab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name)
{
    auto dir = fs::temp_directory_path() / ("greedylab_test_" + name);
    fs::remove_all(dir);
    return dir;
}

}  // namespace

TEST(Parsing, Lists)
{
    EXPECT_EQ(parse_index_list("2..5"), (std::vector<Index>{2, 3, 4, 5}));
    EXPECT_EQ(parse_index_list("2, 4,8"), (std::vector<Index>{2, 4, 8}));
    EXPECT_THROW(parse_index_list("5..2"), std::invalid_argument);
    EXPECT_THROW(parse_index_list("3x"), std::invalid_argument);
    EXPECT_EQ(parse_number_list("0.5, 1/2"), (std::vector<double>{0.5, 0.5}));
}

TEST(Parsing, GapKeys)
{
    EXPECT_EQ(parse_gap("geometric:2:3")[2], 6);
    auto sh = parse_gap("shifted:3");
    EXPECT_EQ(sh[1], 3);
    EXPECT_EQ(sh[4], 6);
    auto v = parse_gap("values:1 3 7:l=3");
    EXPECT_EQ(v[3], 7);
    EXPECT_EQ(v.bound_l(), 3);
    EXPECT_THROW(parse_gap("values:1 5:l=2"), std::invalid_argument);
    EXPECT_THROW(parse_gap("fibonacci"), std::invalid_argument);
}

TEST(Config, ParsesAndRecordsEffectiveValues)
{
    auto cfg = ExperimentConfig::from_string("# note\nexperiment = divergence\nseed = 9\n[divergence]\nK = 3\n");
    EXPECT_EQ(cfg.experiment(), "divergence");
    EXPECT_EQ(cfg.seed(), 9u);
    EXPECT_EQ(cfg.get_as<int>("K", 6), 3);
    EXPECT_DOUBLE_EQ(cfg.get_as<double>("t", 1.0), 1.0);
    EXPECT_EQ(cfg.effective().at("K"), "3");
    EXPECT_EQ(cfg.effective().at("t"), "1");
}

TEST(Config, Rejections)
{
    EXPECT_THROW(ExperimentConfig::from_string("[divergence]\nK = 3\n"), UsageError);
    EXPECT_THROW(ExperimentConfig::from_string("experiment = bogus\n"), UsageError);
    EXPECT_THROW(ExperimentConfig::from_string("experiment = divergence\n[constants]\nt = 1\n"), UsageError);
    EXPECT_THROW(ExperimentConfig::from_string("experiment = divergence\nverbose = 1\n"), UsageError);
    EXPECT_THROW(ExperimentConfig::from_string("experiment = divergence\n[divergence\n"), UsageError);
    EXPECT_THROW(ExperimentConfig::from_string("experiment = divergence\nseed = -x\n").seed(), UsageError);
    auto cfg = ExperimentConfig::from_string("experiment = divergence\n[divergence]\nK = three\n");
    EXPECT_THROW(cfg.get_as<int>("K", 6), UsageError);
    EXPECT_THROW(ExperimentConfig::from_file("/nonexistent/cfg.ini"), UsageError);
}

TEST(Config, UnknownKeyIsUsageError)
{
    auto cfg = ExperimentConfig::from_string("experiment = divergence\n[divergence]\nKK = 3\n");
    EXPECT_THROW(run_experiment(cfg, RunOptions{scratch("unknown"), 1, true}), UsageError);
    auto bad = ExperimentConfig::from_string("experiment = constants\n[constants]\nspace = nope\n");
    EXPECT_THROW(run_experiment(bad, RunOptions{scratch("badspace"), 1, true}), UsageError);
}

TEST(Report, NumberFormatting)
{
    EXPECT_EQ(format_number(0.1), "0.10000000000000001");
    EXPECT_EQ(format_number(2.0), "2");
    EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
    EXPECT_EQ(json_number(std::nan("")), Json("nan"));
}

TEST(Report, CsvLayout)
{
    CsvTable table({"a", "b"});
    table.comment("k = v");
    table.add({"1", "x,y"});
    EXPECT_THROW(table.add({"1"}), std::logic_error);
    std::ostringstream os;
    table.write(os);
    EXPECT_EQ(os.str(), "# k = v\na,b\n1,\"x,y\"\n");
}

TEST(Report, VectorRoundTrip)
{
    auto x = CoeffVector::from_entries({{1, 0.5}, {7, -1.0 / 3.0}});
    EXPECT_EQ(coeff_vector_from_json(Json::parse(to_json(x).dump())), x);
}

TEST(Run, DivergenceOutputsEchoConfigAndAreDeterministic)
{
    auto cfg_text = "experiment = divergence\n[divergence]\nK = 3\nt = 0.5\n";
    auto a = scratch("div_a"), b = scratch("div_b");
    auto ra = run_experiment(ExperimentConfig::from_string(cfg_text), RunOptions{a, 5, false});
    auto rb = run_experiment(ExperimentConfig::from_string(cfg_text), RunOptions{b, 5, false});
    EXPECT_EQ(ra.violations, 0u);
    ASSERT_EQ(ra.files, (std::vector<std::string>{"divergence.csv", "divergence.json"}));
    const auto csv = slurp(a / "divergence.csv");
    EXPECT_EQ(csv, slurp(b / "divergence.csv"));
    EXPECT_EQ(slurp(a / "divergence.json"), slurp(b / "divergence.json"));
    EXPECT_NE(csv.find("# t = 0.5\n"), std::string::npos);
    EXPECT_NE(csv.find("# adversary = true\n"), std::string::npos);
    EXPECT_NE(csv.find("\nm,t,K,min_norm,phi,lower_bound,margin,greedy_set_family\n"), std::string::npos);
    EXPECT_EQ(csv.find('\r'), std::string::npos);
    auto j = Json::parse(slurp(a / "divergence.json"));
    EXPECT_EQ(j["config"]["parameters"]["K"], "3");
}

TEST(Run, QuickCapIsEchoed)
{
    auto dir = scratch("quick");
    run_experiment(ExperimentConfig::defaults("divergence"), RunOptions{dir, 1, true});
    EXPECT_NE(slurp(dir / "divergence.csv").find("# K = 4 (quick cap)"), std::string::npos);
}

TEST(Run, EveryExperimentQuick)
{
    for (const auto& name : experiment_names()) {
        auto dir = scratch("all_" + name);
        auto cfg = ExperimentConfig::defaults(name);
        if (name == "bounded-gaps" || name == "suppression-one")
            cfg = ExperimentConfig::from_string("experiment = " + name + "\n[" + name + "]\ntrials = 300\n");
        if (name == "perturb-audit")
            cfg = ExperimentConfig::from_string("experiment = " + name + "\n[" + name + "]\ntrials = 100\n");
        auto res = run_experiment(cfg, RunOptions{dir, 3, true});
        EXPECT_EQ(res.violations, 0u) << name;
        EXPECT_EQ(res.files.size(), 2u) << name;
    }
}
