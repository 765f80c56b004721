#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace rpkit {

/// Strictly increasing, nonempty, finite list of sample points.
class Grid {
public:
    explicit Grid(std::vector<double> points);

    /// start:stop:step lattice; stop is included when within 1e-12*step of a lattice point.
    static Grid range(double start, double stop, double step);

    /// Accepts "start:stop:step" or a comma separated list.
    static Grid parse(std::string_view text);

    std::span<const double> points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    double operator[](std::size_t i) const { return points_[i]; }
    auto begin() const noexcept { return points_.begin(); }
    auto end() const noexcept { return points_.end(); }

    double min_spacing() const noexcept;

    /// Points satisfying pred, in order; may be empty.
    std::vector<double> select(const std::function<bool(double)>& pred) const;

    bool operator==(const Grid&) const = default;

private:
    std::vector<double> points_;
};

} // namespace rpkit
