#include "rpkit/grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <string>

#include "rpkit/errors.hpp"

namespace rpkit {

namespace {

double parse_number(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw DomainError("malformed number in grid: '" + std::string(s) + "'");
    return value;
}

} // namespace

Grid::Grid(std::vector<double> points) : points_(std::move(points))
{
    if (points_.empty())
        throw DomainError("grid must be nonempty");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!std::isfinite(points_[i]))
            throw DomainError("grid points must be finite");
        if (i > 0 && !(points_[i] > points_[i - 1]))
            throw DomainError("grid points must be strictly increasing");
    }
}

Grid Grid::range(double start, double stop, double step)
{
    if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step))
        throw DomainError("grid range arguments must be finite");
    if (!(step > 0.0))
        throw DomainError("grid step must be positive");
    if (stop < start)
        throw DomainError("grid stop must not precede start");
    const double span = (stop - start) / step;
    if (span > 1e7)
        throw DomainError("grid range has too many points");
    const auto count = static_cast<std::size_t>(std::floor(span + 1e-12)) + 1;
    std::vector<double> pts(count);
    for (std::size_t i = 0; i < count; ++i)
        pts[i] = start + static_cast<double>(i) * step;
    return Grid(std::move(pts));
}

Grid Grid::parse(std::string_view text)
{
    if (text.find(':') != std::string_view::npos) {
        std::vector<double> parts;
        std::size_t pos = 0;
        while (true) {
            auto next = text.find(':', pos);
            parts.push_back(parse_number(text.substr(pos, next - pos)));
            if (next == std::string_view::npos)
                break;
            pos = next + 1;
        }
        if (parts.size() != 3)
            throw DomainError("grid range must be start:stop:step");
        return range(parts[0], parts[1], parts[2]);
    }
    std::vector<double> pts;
    std::size_t pos = 0;
    while (true) {
        auto next = text.find(',', pos);
        pts.push_back(parse_number(text.substr(pos, next - pos)));
        if (next == std::string_view::npos)
            break;
        pos = next + 1;
    }
    return Grid(std::move(pts));
}

double Grid::min_spacing() const noexcept
{
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < points_.size(); ++i)
        best = std::min(best, points_[i] - points_[i - 1]);
    return best;
}

std::vector<double> Grid::select(const std::function<bool(double)>& pred) const
{
    std::vector<double> out;
    std::copy_if(points_.begin(), points_.end(), std::back_inserter(out), pred);
    return out;
}

} // namespace rpkit
