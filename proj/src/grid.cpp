#include "hle/grid.hpp"

#include <cmath>
#include <cstdio>

#include "hle/params.hpp"

namespace hle {

LineGrid LineGrid::make(double half_length, double spacing_request) {
    if (!(half_length > 0.0) || !std::isfinite(half_length)) {
        throw ValidationError("grid half length must be positive and finite");
    }
    if (!(spacing_request > 0.0) || !std::isfinite(spacing_request)) {
        throw ValidationError("grid spacing must be positive and finite");
    }
    const long m = static_cast<long>(std::floor(half_length / spacing_request));
    if (m < 1) {
        throw ValidationError("grid spacing exceeds the half length");
    }
    const double h = half_length / static_cast<double>(m);
    if (h > 0.1 * (1.0 + 1e-12)) {
        char buf[96];
        std::snprintf(buf, sizeof(buf),
                      "grid spacing %.17g exceeds the 0.1 accuracy floor of the stencils", h);
        throw ValidationError(buf);
    }
    return LineGrid(half_length, h, m);
}

LineGrid LineGrid::with_half_count(double spacing, long half_count) {
    if (!(spacing > 0.0) || !std::isfinite(spacing) || spacing > 0.1 * (1.0 + 1e-12)) {
        throw ValidationError("grid spacing must lie in (0, 0.1]");
    }
    if (half_count < 1) throw ValidationError("grid needs at least 3 nodes");
    return LineGrid(spacing * static_cast<double>(half_count), spacing, half_count);
}

std::vector<double> LineGrid::nodes() const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = node(i);
    return out;
}

}  // namespace hle
