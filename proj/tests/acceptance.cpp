// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Run with --criterion N to restrict to a single check.

#include "projcool/harness.hpp"

#include <cstdlib>
#include <cstring>
#include <iostream>
#include <string>

int main(int argc, char** argv) {
    projcool::AcceptanceOptions options;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        auto next = [&]() -> const char* {
            if (i + 1 >= argc) {
                std::cerr << "missing value for " << arg << "\n";
                std::exit(2);
            }
            return argv[++i];
        };
        if (arg == "--criterion") {
            options.only_criterion = std::atoi(next());
        } else if (arg == "--seed") {
            options.seed = std::strtoull(next(), nullptr, 10);
        } else if (arg == "--work-dir") {
            options.work_dir = next();
        } else if (arg == "--help" || arg == "-h") {
            std::cout << "usage: acceptance [--criterion N] [--seed S] [--work-dir DIR]\n";
            return 0;
        } else {
            std::cerr << "unknown argument: " << arg << "\n";
            return 2;
        }
    }

    try {
        const projcool::CheckReport report = projcool::run_acceptance(options);
        std::cout << projcool::format_report(report);
        return report.all_passed() ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "acceptance suite error: " << e.what() << "\n";
        return 2;
    }
}
