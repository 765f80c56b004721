#include "rpkit/cocycle.hpp"

#include <algorithm>
#include <cmath>

#include "rpkit/errors.hpp"

namespace rpkit {

namespace {

void require_positive_elements(double s, double t)
{
    if (!(s > 0.0) || !(t > 0.0) || !std::isfinite(s) || !std::isfinite(t))
        throw DomainError("one-sided cocycle needs group elements in (0, inf)");
}

void require_positive_grid(std::span<const double> grid)
{
    for (double s : grid)
        if (!(s > 0.0) || !std::isfinite(s))
            throw DomainError("hat triviality needs a grid in (0, inf)");
}

} // namespace

StepFunction cocycle(CocycleKind kind, double t)
{
    if (!std::isfinite(t))
        throw DomainError("cocycle argument must be finite");
    switch (kind) {
    case CocycleKind::Brownian:
        if (t > 0.0)
            return StepFunction::indicator(0.0, t, 1.0);
        if (t < 0.0)
            return StepFunction::indicator(t, 0.0, -1.0);
        return StepFunction();
    case CocycleKind::OneSidedIndicator:
        if (!(t > 0.0))
            throw DomainError("OneSidedIndicator cocycle needs t > 0");
        return StepFunction::indicator(0.0, t, 1.0);
    }
    return StepFunction();
}

StepFunction normalized_indicator(double t)
{
    if (!(t > 0.0) || !std::isfinite(t))
        throw DomainError("normalized indicator needs t > 0");
    return StepFunction::indicator(0.0, t, 1.0 / std::sqrt(t));
}

StepFunction dilation_cocycle(double a)
{
    const auto unit = StepFunction::indicator(0.0, 1.0);
    return dilate_by(unit, a) - unit;
}

double psi_of(CocycleKind kind, double t) { return norm_squared(cocycle(kind, t)); }

CocycleVerdict check_cocycle_identity(CocycleKind kind, double s, double t, double tol)
{
    CocycleVerdict v;
    if (kind == CocycleKind::Brownian) {
        const auto lhs = cocycle(kind, s + t);
        const auto rhs = cocycle(kind, s) + shift(cocycle(kind, t), s);
        v.distance = norm(lhs - rhs);
    } else {
        require_positive_elements(s, t);
        const auto lhs = dilation_cocycle(s * t);
        const auto rhs = dilation_cocycle(s) + dilate_by(dilation_cocycle(t), s);
        v.distance = norm(lhs - rhs);
    }
    v.pass = v.distance <= tol;
    return v;
}

CocycleVerdict check_theta_equivariance(CocycleKind kind, double t, double tol)
{
    if (kind != CocycleKind::Brownian)
        throw DomainError("check_theta_equivariance: only the Brownian cocycle is supported");
    CocycleVerdict v;
    v.distance = norm(reflect_odd(cocycle(kind, t)) - cocycle(kind, -t));
    v.pass = v.distance <= tol;
    return v;
}

DualityVerdict check_duality(CocycleKind kind, double s, double t, double tol)
{
    DualityVerdict v;
    auto record = [&](const StepFunction& bs, const StepFunction& bt, double psi_s, double psi_t, double psi_rel) {
        const double c = inner(bs, bt);
        v.covariance_error = std::max(v.covariance_error, std::abs(c - 0.5 * (psi_s + psi_t - psi_rel)));
        v.increment_error = std::max(v.increment_error, std::abs(psi_rel - norm_squared(bs - bt)));
    };
    if (kind == CocycleKind::Brownian) {
        record(cocycle(kind, s), cocycle(kind, t), psi_of(kind, s), psi_of(kind, t), psi_of(kind, t - s));
    } else {
        require_positive_elements(s, t);
        const double gap = std::abs(t - s);
        record(cocycle(kind, s), cocycle(kind, t), psi_of(kind, s), psi_of(kind, t),
               gap == 0.0 ? 0.0 : psi_of(kind, gap));
        const auto bs = dilation_cocycle(s), bt = dilation_cocycle(t);
        record(bs, bt, norm_squared(bs), norm_squared(bt), norm_squared(dilation_cocycle(t / s)));
    }
    v.pass = v.covariance_error <= tol && v.increment_error <= tol;
    return v;
}

HatTrivialityVerdict check_hat_triviality(CocycleKind kind, std::span<const double> s_grid, double tol)
{
    if (kind != CocycleKind::Brownian)
        throw DomainError("hat triviality diagnostic is defined for the Brownian cocycle");
    require_positive_grid(s_grid);
    HatTrivialityVerdict v;
    v.degenerate = s_grid.empty();
    for (double s : s_grid)
        for (double t : s_grid)
            v.max_abs_inner = std::max(v.max_abs_inner, std::abs(inner(cocycle(kind, s), cocycle(kind, -t))));
    v.all_orthogonal = v.max_abs_inner <= tol;
    return v;
}

HatTrivialityVerdict check_hat_triviality(const KernelSpec& covariance, std::span<const double> s_grid, double tol)
{
    require_positive_grid(s_grid);
    HatTrivialityVerdict v;
    v.degenerate = s_grid.empty();
    for (double s : s_grid)
        for (double t : s_grid)
            v.max_abs_inner = std::max(v.max_abs_inner, std::abs(eval_kernel(covariance, s, -t)));
    v.all_orthogonal = v.max_abs_inner <= tol;
    return v;
}

} // namespace rpkit
