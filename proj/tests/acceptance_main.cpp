// Acceptance battery entry point: one PASS/FAIL line per check, nonzero exit
// if any check fails. Arguments: [out_dir] [seed].

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include "nonlocal/acceptance.hpp"

int main(int argc, char** argv) {
    const std::string out_dir = (argc > 1) ? argv[1] : "acceptance_out";
    const std::uint64_t seed = (argc > 2) ? std::stoull(argv[2]) : 20260819ULL;
    std::filesystem::create_directories(out_dir);
    try {
        const nonlocal::AcceptanceReport report = nonlocal::run_acceptance(out_dir, seed, std::cout);
        std::size_t passed = 0;
        for (const auto& c : report.criteria)
            if (c.pass) ++passed;
        std::cout << passed << "/" << report.criteria.size() << " checks passed, " << report.wall_seconds
                  << " s total\n";
        return report.all_pass() ? 0 : 1;
    } catch (const std::exception& e) {
        std::cout << "FAIL  battery aborted: " << e.what() << "\n";
        return 3;
    }
}
