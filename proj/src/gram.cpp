#include "rpkit/gram.hpp"

#include <cmath>
#include <sstream>

#include "parallel_for.hpp"
#include "rpkit/errors.hpp"

namespace rpkit {

namespace {

template <class Loop, class Entry>
Eigen::MatrixXd assemble(Eigen::Index n, Loop loop, Entry entry)
{
    Eigen::MatrixXd m(n, n);
    loop(static_cast<std::int64_t>(n), [&](std::int64_t i) {
        for (Eigen::Index j = 0; j < n; ++j)
            m(i, j) = entry(static_cast<Eigen::Index>(i), j);
    });
    return m;
}

template <class Loop>
GramMatrix scalar_gram(const KernelSpec& spec, const Grid& grid, Loop loop)
{
    const auto n = static_cast<Eigen::Index>(grid.size());
    auto m = assemble(n, loop, [&](Eigen::Index i, Eigen::Index j) {
        const double s = grid[static_cast<std::size_t>(i)];
        const double t = grid[static_cast<std::size_t>(j)];
        try {
            return eval_kernel(spec, s, t);
        } catch (const DomainError& e) {
            std::ostringstream os;
            os.precision(17);
            os << e.what() << " (grid point " << s << ")";
            throw DomainError(os.str());
        }
    });
    return GramMatrix::from_matrix(m, grid);
}

auto parallel_loop = [](std::int64_t n, auto&& body) { detail::parallel_for(n, body); };
auto serial_loop = [](std::int64_t n, auto&& body) { detail::serial_for(n, body); };

} // namespace

GramMatrix GramMatrix::from_matrix(const Eigen::MatrixXd& m, std::optional<Grid> grid)
{
    if (m.rows() != m.cols())
        throw DomainError("Gram matrix must be square");
    if (grid && static_cast<Eigen::Index>(grid->size()) != m.rows())
        throw DomainError("Gram matrix size must match its grid");
    GramMatrix g;
    g.entries = 0.5 * (m + m.transpose());
    g.grid = std::move(grid);
    g.symmetrized = true;
    return g;
}

double reflect_point(Reflection r, double t)
{
    switch (r) {
    case Reflection::Negation:
        return -t;
    case Reflection::Inversion:
        if (t == 0.0)
            throw DomainError("inversion reflection undefined at t = 0");
        return 1.0 / t;
    case Reflection::Identity:
        return t;
    }
    return t;
}

ReflectionSetup::ReflectionSetup(Reflection r, Grid positive) : reflection(r), positive_part(std::move(positive))
{
    if (r == Reflection::Inversion) {
        for (double t : positive_part)
            if (!(t > 0.0))
                throw DomainError("inversion reflection requires points in (0, inf)");
    }
}

GramMatrix gram(const KernelSpec& spec, const Grid& grid) { return scalar_gram(spec, grid, parallel_loop); }

GramMatrix gram(const KernelSpec& spec, std::span<const Eigen::VectorXd> points)
{
    const auto n = static_cast<Eigen::Index>(points.size());
    if (n == 0)
        throw DomainError("Gram matrix needs at least one point");
    auto m = assemble(n, parallel_loop, [&](Eigen::Index i, Eigen::Index j) {
        const auto& x = points[static_cast<std::size_t>(i)];
        const auto& y = points[static_cast<std::size_t>(j)];
        return eval_kernel(spec, std::span<const double>(x.data(), static_cast<std::size_t>(x.size())),
                           std::span<const double>(y.data(), static_cast<std::size_t>(y.size())));
    });
    return GramMatrix::from_matrix(m);
}

GramMatrix reflected_gram(const KernelSpec& spec, const ReflectionSetup& setup)
{
    const Grid& grid = setup.positive_part;
    const auto n = static_cast<Eigen::Index>(grid.size());
    auto m = assemble(n, parallel_loop, [&](Eigen::Index i, Eigen::Index j) {
        const double s = grid[static_cast<std::size_t>(i)];
        try {
            return eval_kernel(spec, reflect_point(setup.reflection, s), grid[static_cast<std::size_t>(j)]);
        } catch (const DomainError& e) {
            std::ostringstream os;
            os.precision(17);
            os << e.what() << " (reflected grid point " << s << ")";
            throw DomainError(os.str());
        }
    });
    return GramMatrix::from_matrix(m, grid);
}

namespace reference {

GramMatrix gram_serial(const KernelSpec& spec, const Grid& grid) { return scalar_gram(spec, grid, serial_loop); }

} // namespace reference

} // namespace rpkit
