#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "hle/operators.hpp"
#include "hle/radial.hpp"

namespace hle {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shortest exact decimal form of a double (17 significant digits), so CSV and
/// JSON round-trip bit for bit.
std::string fmt17(double x);

/// Columns: s,g,f,gp,fp,energy. Derivatives are central differences; full
/// round-trip precision.
void write_trajectory_csv(const std::string& path, const TrajectoryPair& t);

struct TrajectoryCsv {
    std::vector<double> s;
    std::vector<double> g;
    std::vector<double> f;
};

/// Reads back the first three columns of a trajectory CSV.
TrajectoryCsv read_trajectory_csv(const std::string& path);

/// Rebuilds the trajectory exactly: node values are taken verbatim from the
/// file and the spacing from the first node right of zero, so re-running the
/// verifiers reproduces the solve bit for bit.
TrajectoryPair trajectory_from_csv(const TrajectoryCsv& csv, const ReducedParams& red);

/// Columns: r,u,v,residual1,residual2 (pointwise radial PDE residuals).
void write_radial_csv(const std::string& path, const RadialSolution& sol,
                      const PdeResidual& res);

}  // namespace hle
