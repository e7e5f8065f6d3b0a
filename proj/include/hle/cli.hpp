#pragma once

#include <string>
#include <vector>

#include "hle/params.hpp"
#include "hle/variational.hpp"

namespace hle {

/// Exit codes of the command pipeline.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidParams = 2;
inline constexpr int kExitNonconvergence = 3;
inline constexpr int kExitIoFailure = 4;

struct RunConfig {
    enum class Command { Classify, Solve, Verify, Rellich, Sweep };

    Command command = Command::Classify;
    SystemParams params;

    // rellich triple
    int rellich_n = 0;
    double rellich_theta = 0.0;
    double rellich_alpha = 0.0;

    // grid
    double L = 15.0;
    double h = 0.01;

    SolveOptions solver;
    bool with_duality = false;

    std::string out;     // base path; empty prints the report to stdout
    std::string format = "json";  // json | csv (classify, rellich, sweep)
    std::string input;   // verify: trajectory CSV written by solve

    // sweep lists; b is solved from the hyperbola per tuple
    std::vector<int> sweep_n;
    std::vector<double> sweep_a;
    std::vector<double> sweep_p;
    std::vector<double> sweep_q;
};

/// Runs one command; writes files (or stdout) and returns the exit code.
/// Validation errors exit 2, solver nonconvergence 3, I/O failures 4.
int run(const RunConfig& config);

}  // namespace hle
