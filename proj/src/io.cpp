#include "hle/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hle {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_trajectory_csv(const std::string& path, const TrajectoryPair& t) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    const auto gp = central_derivative(t.grid, t.g);
    const auto fp = central_derivative(t.grid, t.f);
    const auto e = energy(t);
    out << "s,g,f,gp,fp,energy\n";
    for (std::size_t i = 0; i < t.grid.size(); ++i) {
        out << fmt17(t.grid.node(i)) << ',' << fmt17(t.g[i]) << ',' << fmt17(t.f[i]) << ','
            << fmt17(gp[i]) << ',' << fmt17(fp[i]) << ',' << fmt17(e[i]) << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

namespace {

double parse_field(const std::string& field, const std::string& path) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        throw IoError("malformed numeric field '" + field + "' in " + path);
    }
    return value;
}

}  // namespace

TrajectoryCsv read_trajectory_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty file: " + path);
    if (line.rfind("s,g,f", 0) != 0) {
        throw IoError("unexpected header in " + path + ": " + line);
    }
    TrajectoryCsv csv;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string field;
        std::vector<double> values;
        while (std::getline(row, field, ',')) values.push_back(parse_field(field, path));
        if (values.size() < 3) throw IoError("short row in " + path);
        csv.s.push_back(values[0]);
        csv.g.push_back(values[1]);
        csv.f.push_back(values[2]);
    }
    if (csv.s.size() < 3 || csv.s.size() % 2 == 0) {
        throw IoError("trajectory must have an odd node count >= 3: " + path);
    }
    return csv;
}

TrajectoryPair trajectory_from_csv(const TrajectoryCsv& csv, const ReducedParams& red) {
    const std::size_t n = csv.s.size();
    const std::size_t mid = n / 2;
    if (csv.s[mid] != 0.0 && std::fabs(csv.s[mid]) > 1e-9) {
        throw IoError("trajectory grid is not centered at s = 0");
    }
    const double h = csv.s[mid + 1] - csv.s[mid];  // exact: node m+1 is 1*h
    LineGrid grid = LineGrid::with_half_count(h, static_cast<long>(mid));
    for (std::size_t i = 0; i < n; ++i) {
        if (std::fabs(csv.s[i] - grid.node(i)) > 1e-9 * std::max(1.0, std::fabs(csv.s[i]))) {
            throw IoError("trajectory grid is not uniform");
        }
    }
    TrajectoryPair t;
    t.grid = grid;
    t.g = csv.g;
    t.f = csv.f;
    t.red = red;
    return t;
}

void write_radial_csv(const std::string& path, const RadialSolution& sol,
                      const PdeResidual& res) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "r,u,v,residual1,residual2\n";
    for (std::size_t i = 0; i < sol.radii.size(); ++i) {
        out << fmt17(sol.radii[i]) << ',' << fmt17(sol.u[i]) << ',' << fmt17(sol.v[i])
            << ',' << fmt17(res.r1[i]) << ',' << fmt17(res.r2[i]) << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace hle
