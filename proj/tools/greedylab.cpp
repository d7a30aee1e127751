// Command-line runner: `run` executes one configured experiment, `verify` the acceptance suite.
// Exit codes: 0 ok, 1 usage error, 2 invariant violation.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "greedylab/greedylab.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitViolation = 2;

int run_command(const std::string& config_path, const std::string& out_dir, std::optional<std::uint64_t> seed,
                bool quick)
{
    auto cfg = greedylab::ExperimentConfig::from_file(config_path);
    greedylab::RunOptions opts;
    opts.out_dir = out_dir;
    opts.seed = seed ? *seed : cfg.seed().value_or(1);
    opts.quick = quick;
    auto result = greedylab::run_experiment(cfg, opts);
    for (const auto& line : result.summary) std::cout << result.name << ": " << line << '\n';
    for (const auto& f : result.files) std::cout << "wrote " << (opts.out_dir / f).string() << '\n';
    if (result.violations > 0) {
        std::cerr << result.name << ": " << result.violations << " invariant violation(s)\n";
        return kExitViolation;
    }
    return kExitOk;
}

int verify_command(const std::string& out_dir, std::uint64_t seed, bool quick)
{
    greedylab::AcceptanceOptions opts{seed, quick};
    auto results = greedylab::run_acceptance(opts, [](const greedylab::CriterionResult& r) {
        std::cout << fmt::format("{}  {}  {:<78}  {}\n", r.passed ? "PASS" : "FAIL", r.id, r.name, r.detail);
        std::cerr << fmt::format("criterion {} took {:.2f} s\n", r.id, r.seconds);
        std::cout.flush();
    });
    const auto report = greedylab::acceptance_report(results, opts);
    if (!out_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(out_dir, ec);
        std::ofstream out(std::filesystem::path(out_dir) / "verify_report.txt", std::ios::binary);
        if (ec || !out) {
            std::cerr << "error: cannot write report to '" << out_dir << "'\n";
            return kExitUsage;
        }
        out << report;
    }
    bool all = true;
    for (const auto& r : results) all = all && r.passed;
    std::cout << (all ? "all criteria passed" : "some criteria FAILED") << '\n';
    return all ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"greedylab: thresholding greedy algorithm laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool quick = false;

    auto* run = app.add_subcommand("run", "run the experiment named in a config file");
    run->add_option("--config", config_path, "config file")->required();
    run->add_option("--out", out_dir, "output directory");
    auto* run_seed = run->add_option("--seed", seed, "RNG seed (overrides the config)");
    run->add_flag("--quick", quick, "desk-scale caps: K <= 4, dims <= 6");

    std::string verify_out;
    std::uint64_t verify_seed = 42;
    auto* verify = app.add_subcommand("verify", "run the acceptance suite");
    verify->add_option("--out", verify_out, "directory for verify_report.txt");
    verify->add_option("--seed", verify_seed, "RNG seed");
    verify->add_flag("--quick", quick, "reduced profile (K <= 4, dims <= 6)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*run)
            return run_command(config_path, out_dir,
                               run_seed->count() ? std::optional<std::uint64_t>(seed) : std::nullopt, quick);
        return verify_command(verify_out, verify_seed, quick);
    } catch (const greedylab::UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const greedylab::InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << '\n';
        return kExitViolation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitViolation;
    }
}
