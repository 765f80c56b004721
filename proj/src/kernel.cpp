#include "rpkit/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rpkit/errors.hpp"

namespace rpkit {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

std::string fmt_point(double t)
{
    std::ostringstream os;
    os.precision(17);
    os << t;
    return os.str();
}

void require_positive(const char* variant, double s, double t)
{
    if (!(s > 0.0) || !(t > 0.0)) {
        throw DomainError(std::string(variant) + " kernel requires positive arguments, got (" +
                          fmt_point(s) + ", " + fmt_point(t) + ")");
    }
}

std::size_t table_index(const kernels::Table& table, double x)
{
    auto pts = table.grid.points();
    auto it = std::lower_bound(pts.begin(), pts.end(), x);
    if (it == pts.end() || *it != x)
        throw DomainError("Tabulated kernel has no entry at t = " + fmt_point(x));
    return static_cast<std::size_t>(it - pts.begin());
}

} // namespace

KernelSpec KernelSpec::exponential(double lambda)
{
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw DomainError("Exponential kernel requires finite lambda >= 0");
    return {kernels::Exponential{lambda}};
}

KernelSpec KernelSpec::brownian_two_sided() { return {kernels::BrownianTwoSided{}}; }

KernelSpec KernelSpec::fractional_brownian(double hurst)
{
    if (!(hurst > 0.0 && hurst < 1.0))
        throw DomainError("FractionalBrownian kernel requires H in (0, 1)");
    return {kernels::FractionalBrownian{hurst}};
}

KernelSpec KernelSpec::brownian_one_sided() { return {kernels::BrownianOneSided{}}; }
KernelSpec KernelSpec::normalized_one_sided() { return {kernels::NormalizedOneSided{}}; }
KernelSpec KernelSpec::gaussian_fock() { return {kernels::GaussianFock{}}; }

KernelSpec KernelSpec::tabulated(Grid grid, const Eigen::MatrixXd& values)
{
    const auto n = static_cast<Eigen::Index>(grid.size());
    if (values.rows() != n || values.cols() != n)
        throw DomainError("Tabulated kernel matrix must be square of grid size");
    if (!values.allFinite())
        throw DomainError("Tabulated kernel entries must be finite");
    const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
    const double asym = (values - values.transpose()).cwiseAbs().maxCoeff() / scale;
    if (asym > 1e-6)
        throw DomainError("Tabulated kernel asymmetry " + fmt_point(asym) + " exceeds 1e-6");
    auto table = std::make_shared<kernels::Table>(
        kernels::Table{std::move(grid), 0.5 * (values + values.transpose()), asym});
    return {kernels::Tabulated{std::move(table)}};
}

KernelSpec KernelSpec::normalized(KernelSpec base)
{
    return {kernels::Normalized{std::make_shared<const KernelSpec>(std::move(base))}};
}

std::string KernelSpec::name() const
{
    return std::visit(overloaded{
                          [](const kernels::Exponential&) { return std::string("Exponential"); },
                          [](const kernels::BrownianTwoSided&) { return std::string("BrownianTwoSided"); },
                          [](const kernels::FractionalBrownian&) { return std::string("FractionalBrownian"); },
                          [](const kernels::BrownianOneSided&) { return std::string("BrownianOneSided"); },
                          [](const kernels::NormalizedOneSided&) { return std::string("NormalizedOneSided"); },
                          [](const kernels::GaussianFock&) { return std::string("GaussianFock"); },
                          [](const kernels::Tabulated&) { return std::string("Tabulated"); },
                          [](const kernels::Normalized& k) { return "Normalized(" + k.base->name() + ")"; },
                      },
                      variant);
}

double eval_kernel(const KernelSpec& spec, double s, double t)
{
    if (!std::isfinite(s) || !std::isfinite(t))
        throw DomainError(spec.name() + " kernel requires finite arguments");
    return std::visit(
        overloaded{
            [&](const kernels::Exponential& k) { return std::exp(-k.lambda * std::abs(s - t)); },
            [&](const kernels::BrownianTwoSided&) {
                return 0.5 * (std::abs(s) + std::abs(t) - std::abs(s - t));
            },
            [&](const kernels::FractionalBrownian& k) {
                const double e = 2.0 * k.hurst;
                return 0.5 * (std::pow(std::abs(s), e) + std::pow(std::abs(t), e) -
                              std::pow(std::abs(s - t), e));
            },
            [&](const kernels::BrownianOneSided&) {
                require_positive("BrownianOneSided", s, t);
                return std::min(s, t);
            },
            [&](const kernels::NormalizedOneSided&) {
                require_positive("NormalizedOneSided", s, t);
                return std::sqrt(std::min(s, t) / std::max(s, t));
            },
            [&](const kernels::GaussianFock&) {
                const double d = s - t;
                return std::exp(-0.5 * d * d);
            },
            [&](const kernels::Tabulated& k) {
                return k.table->values(static_cast<Eigen::Index>(table_index(*k.table, s)),
                                       static_cast<Eigen::Index>(table_index(*k.table, t)));
            },
            [&](const kernels::Normalized& k) {
                const double vs = eval_kernel(*k.base, s, s);
                const double vt = eval_kernel(*k.base, t, t);
                if (!(vs > 0.0))
                    throw DomainError(spec.name() + ": zero variance at t = " + fmt_point(s));
                if (!(vt > 0.0))
                    throw DomainError(spec.name() + ": zero variance at t = " + fmt_point(t));
                return eval_kernel(*k.base, s, t) / std::sqrt(vs * vt);
            },
        },
        spec.variant);
}

double eval_kernel(const KernelSpec& spec, std::span<const double> x, std::span<const double> y)
{
    if (std::holds_alternative<kernels::GaussianFock>(spec.variant)) {
        if (x.size() != y.size())
            throw DomainError("GaussianFock kernel requires equal-length vectors");
        double d2 = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double d = x[i] - y[i];
            d2 += d * d;
        }
        return std::exp(-0.5 * d2);
    }
    if (x.size() != 1 || y.size() != 1)
        throw DomainError(spec.name() + " kernel takes scalar arguments");
    return eval_kernel(spec, x[0], y[0]);
}

} // namespace rpkit
