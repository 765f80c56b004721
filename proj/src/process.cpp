#include "rpkit/process.hpp"

#include <algorithm>
#include <cmath>

#include "rpkit/errors.hpp"

namespace rpkit {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

bool in_domain(const KernelSpec& k, double s, double t)
{
    try {
        (void)eval_kernel(k, s, t);
        return true;
    } catch (const DomainError&) {
        return false;
    }
}

} // namespace

ProcessSpec ProcessSpec::brownian_two_sided() { return {process::BrownianTwoSided{}}; }

ProcessSpec ProcessSpec::fractional_brownian(double hurst)
{
    if (!(hurst > 0.0 && hurst < 1.0))
        throw DomainError("FractionalBrownian process requires H in (0, 1)");
    return {process::FractionalBrownian{hurst}};
}

ProcessSpec ProcessSpec::brownian_one_sided() { return {process::BrownianOneSided{}}; }
ProcessSpec ProcessSpec::normalized_one_sided() { return {process::NormalizedOneSided{}}; }
ProcessSpec ProcessSpec::custom(KernelSpec kernel) { return {process::Custom{std::move(kernel)}}; }

std::string ProcessSpec::name() const
{
    return std::visit(overloaded{
                          [](const process::BrownianTwoSided&) { return std::string("BrownianTwoSided"); },
                          [](const process::FractionalBrownian&) { return std::string("FractionalBrownian"); },
                          [](const process::BrownianOneSided&) { return std::string("BrownianOneSided"); },
                          [](const process::NormalizedOneSided&) { return std::string("NormalizedOneSided"); },
                          [](const process::Custom& c) { return "Custom(" + c.kernel.name() + ")"; },
                      },
                      variant);
}

std::vector<std::pair<std::string, double>> ProcessSpec::params() const
{
    if (auto f = std::get_if<process::FractionalBrownian>(&variant))
        return {{"hurst", f->hurst}};
    if (auto c = std::get_if<process::Custom>(&variant)) {
        if (auto e = std::get_if<kernels::Exponential>(&c->kernel.variant))
            return {{"lambda", e->lambda}};
        if (auto f = std::get_if<kernels::FractionalBrownian>(&c->kernel.variant))
            return {{"hurst", f->hurst}};
    }
    return {};
}

KernelSpec covariance_kernel(const ProcessSpec& p)
{
    return std::visit(overloaded{
                          [](const process::BrownianTwoSided&) { return KernelSpec::brownian_two_sided(); },
                          [](const process::FractionalBrownian& f) { return KernelSpec::fractional_brownian(f.hurst); },
                          [](const process::BrownianOneSided&) { return KernelSpec::brownian_one_sided(); },
                          [](const process::NormalizedOneSided&) { return KernelSpec::normalized_one_sided(); },
                          [](const process::Custom& c) { return c.kernel; },
                      },
                      p.variant);
}

double covariance(const ProcessSpec& p, double s, double t) { return eval_kernel(covariance_kernel(p), s, t); }

double increment_form(const ProcessSpec& p, double s, double t)
{
    const auto k = covariance_kernel(p);
    return eval_kernel(k, t, t) + eval_kernel(k, s, s) - 2.0 * eval_kernel(k, s, t);
}

StationarityVerdict check_stationary_increments(const ProcessSpec& p, const Grid& grid, double tol,
                                                std::optional<std::vector<double>> shifts)
{
    const auto k = covariance_kernel(p);
    if (!shifts) {
        shifts.emplace();
        for (std::size_t i = 1; i < grid.size(); ++i) {
            shifts->push_back(grid[i] - grid[0]);
            shifts->push_back(grid[0] - grid[i]);
        }
    }
    auto d = [&](double s, double t) {
        return eval_kernel(k, t, t) + eval_kernel(k, s, s) - 2.0 * eval_kernel(k, s, t);
    };
    StationarityVerdict v;
    bool ok = true;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t j = i + 1; j < grid.size(); ++j) {
            const double s = grid[i], t = grid[j];
            const double base = d(s, t);
            for (double h : *shifts) {
                if (!in_domain(k, s + h, t + h))
                    continue;
                const double moved = d(s + h, t + h);
                const double dev = std::abs(moved - base);
                ++v.pairs_checked;
                v.max_deviation = std::max(v.max_deviation, dev);
                if (dev > tol * std::max(1.0, std::abs(base)))
                    ok = false;
            }
        }
    }
    v.degenerate = v.pairs_checked < 2;
    v.pass = ok;
    return v;
}

ProcessSpec normalize_covariance(const ProcessSpec& p)
{
    return ProcessSpec::custom(KernelSpec::normalized(covariance_kernel(p)));
}

StationarityVerdict check_dilation_stationarity(const Grid& grid, std::span<const double> scales, double tol,
                                                const ProcessSpec& p)
{
    for (double t : grid)
        if (!(t > 0.0))
            throw DomainError("dilation stationarity needs a grid in (0, inf)");
    for (double a : scales)
        if (!(a > 0.0) || !std::isfinite(a))
            throw DomainError("dilation scales must be positive reals");
    const auto k = covariance_kernel(p);
    StationarityVerdict v;
    bool ok = true;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t j = i; j < grid.size(); ++j) {
            const double base = eval_kernel(k, grid[i], grid[j]);
            for (double a : scales) {
                const double dev = std::abs(eval_kernel(k, a * grid[i], a * grid[j]) - base);
                ++v.pairs_checked;
                v.max_deviation = std::max(v.max_deviation, dev);
                if (dev > tol * std::max(1.0, std::abs(base)))
                    ok = false;
            }
        }
    }
    v.degenerate = v.pairs_checked < 2;
    v.pass = ok;
    return v;
}

} // namespace rpkit
