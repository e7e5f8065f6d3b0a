#pragma once

#include <cstddef>
#include <vector>

namespace hle {

/// Uniform symmetric grid on [-L, L] with an odd node count, so s = 0 is a node.
/// The requested spacing is snapped to L/floor(L/h) so the endpoints land on +/-L.
class LineGrid {
public:
    /// Placeholder 3-node grid; real grids come from make().
    LineGrid() : LineGrid(0.1, 0.1, 1) {}

    /// Throws ValidationError if L <= 0, h <= 0, or the (snapped) spacing exceeds 0.1,
    /// the documented accuracy floor of the O(h^2) stencils.
    static LineGrid make(double half_length, double spacing_request);

    /// Exact reconstruction from a known spacing and half count (no snapping);
    /// used when re-reading grids from files.
    static LineGrid with_half_count(double spacing, long half_count);

    double half_length() const { return half_length_; }
    double spacing() const { return spacing_; }
    std::size_t size() const { return 2 * static_cast<std::size_t>(half_count_) + 1; }
    std::size_t zero_index() const { return static_cast<std::size_t>(half_count_); }

    /// s_i = (i - m) * h; symmetric about 0 by construction.
    double node(std::size_t i) const {
        return (static_cast<double>(i) - static_cast<double>(half_count_)) * spacing_;
    }

    std::vector<double> nodes() const;

    bool operator==(const LineGrid& other) const {
        return half_count_ == other.half_count_ && spacing_ == other.spacing_;
    }

private:
    LineGrid(double L, double h, long m) : half_length_(L), spacing_(h), half_count_(m) {}

    double half_length_ = 0.0;
    double spacing_ = 0.0;
    long half_count_ = 0;
};

}  // namespace hle
