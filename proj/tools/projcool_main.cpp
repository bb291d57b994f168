#include "projcool/harness.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

// Exit codes: 0 success, 1 threshold/acceptance failure, 2 configuration error.
constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfigError = 2;

std::filesystem::path resolve_out(const std::string& cli_value) {
    if (!cli_value.empty()) return cli_value;
    if (const char* env = std::getenv("PROJCOOL_OUT")) return env;
    return std::filesystem::current_path();
}

void print_files(const std::vector<std::filesystem::path>& files) {
    for (const auto& f : files) std::cout << "wrote " << f.string() << "\n";
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw projcool::ConfigError("cannot open file: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"projcool: projected-cooling lattice simulator"};
    app.require_subcommand(1);

    std::string out_dir;
    std::uint64_t seed = 1;
    double eps = 0.05;

    auto add_common = [&](CLI::App* cmd, bool with_eps) {
        cmd->add_option("--out", out_dir, "output directory (default: $PROJCOOL_OUT or cwd)");
        cmd->add_option("--seed", seed, "root seed for all randomness in the run");
        if (with_eps) cmd->add_option("--eps", eps, "noise strength for the noisy curves");
    };

    std::string config_path;
    auto* cmd_run = app.add_subcommand("run", "run one experiment from a config file");
    cmd_run->add_option("config", config_path, "experiment config (json)")->required();
    cmd_run->add_option("--out", out_dir, "override the config's output directory");

    auto* cmd_fig1 = app.add_subcommand("fig1", "five random-initial fixed-point runs");
    add_common(cmd_fig1, false);
    auto* cmd_fig2a = app.add_subcommand("fig2a", "overlap-vs-steps curves, four-well chain");
    add_common(cmd_fig2a, true);
    auto* cmd_fig2b = app.add_subcommand("fig2b", "overlap-vs-steps curves, two-particle model");
    add_common(cmd_fig2b, true);
    auto* cmd_fig3 = app.add_subcommand("fig3", "interior wave-function grids");
    cmd_fig3->add_option("--out", out_dir, "output directory (default: $PROJCOOL_OUT or cwd)");

    auto* cmd_check = app.add_subcommand("check", "run the full verification suite");
    int criterion = 0;
    cmd_check->add_option("--criterion", criterion, "run a single numbered check (1-9)");
    cmd_check->add_option("--out", out_dir, "scratch directory for the reproducibility check");
    cmd_check->add_option("--seed", seed, "root seed");

    auto* cmd_sweep = app.add_subcommand("sweep", "run a parameter-grid sweep from a config file");
    cmd_sweep->add_option("config", config_path, "sweep config (json with base + grid)")->required();
    cmd_sweep->add_option("--out", out_dir, "override the base config's output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_run->parsed()) {
            auto config = projcool::ExperimentConfig::load(config_path);
            if (!out_dir.empty()) config.output_dir = out_dir;
            if (config.output_dir.empty()) config.output_dir = resolve_out("").string();
            const auto res = projcool::run_single(config);
            print_files(res.files);
            std::cout << "max overlap " << projcool::format_double(res.artifact.summary.max_overlap)
                      << ", final overlap "
                      << projcool::format_double(res.artifact.summary.final_overlap) << "\n";
            return kExitOk;
        }
        if (cmd_fig1->parsed()) {
            projcool::Fig1Options opt;
            opt.output_dir = resolve_out(out_dir);
            opt.seed = seed;
            const auto res = projcool::run_fig1(opt);
            print_files(res.files);
            return kExitOk;
        }
        if (cmd_fig2a->parsed() || cmd_fig2b->parsed()) {
            projcool::Fig2Options opt;
            opt.output_dir = resolve_out(out_dir);
            opt.seed = seed;
            opt.epsilon = eps;
            const auto res = projcool::run_fig2(
                cmd_fig2a->parsed() ? projcool::Fig2Panel::A : projcool::Fig2Panel::B, opt);
            print_files(res.files);
            return kExitOk;
        }
        if (cmd_fig3->parsed()) {
            projcool::Fig3Options opt;
            opt.output_dir = resolve_out(out_dir);
            const auto res = projcool::run_fig3(opt);
            print_files(res.files);
            return kExitOk;
        }
        if (cmd_check->parsed()) {
            projcool::AcceptanceOptions opt;
            if (!out_dir.empty()) opt.work_dir = out_dir;
            opt.seed = seed;
            if (criterion != 0) opt.only_criterion = criterion;
            const auto report = projcool::run_acceptance(opt);
            std::cout << projcool::format_report(report);
            return report.all_passed() ? kExitOk : kExitCheckFailed;
        }
        if (cmd_sweep->parsed()) {
            const auto res = projcool::run_sweep(slurp(config_path),
                                                 out_dir.empty() ? std::filesystem::path{}
                                                                 : std::filesystem::path(out_dir));
            print_files(res.files);
            return kExitOk;
        }
    } catch (const projcool::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
    return kExitConfigError;
}
