// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion. Exits nonzero if any criterion fails.

#include "hydrofine/checks.hpp"

#include <cstdio>

int main() {
    const auto reports = hydrofine::checks::run_acceptance_suite();
    bool all_pass = true;
    std::printf("\n");
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& rep = reports[i];
        for (const auto& item : rep.items) {
            std::printf("    [%s] %s — %s\n", item.pass ? "pass" : "FAIL", item.name.c_str(),
                        item.detail.c_str());
        }
        std::printf("[%s] criterion %zu: %s (%.2f s, budget %.0f s)\n\n",
                    rep.pass() ? "PASS" : "FAIL", i + 1, rep.name.c_str(), rep.seconds,
                    rep.budget_seconds);
        all_pass = all_pass && rep.pass();
    }
    std::printf("acceptance suite: %s\n", all_pass ? "ALL CRITERIA PASS" : "CRITERIA FAILED");
    return all_pass ? 0 : 1;
}
