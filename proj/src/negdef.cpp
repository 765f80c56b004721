#include "rpkit/negdef.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include <Eigen/SVD>

#include "rpkit/errors.hpp"
#include "rpkit/nnls.hpp"

namespace rpkit {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

std::string fmt(double x)
{
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

Eigen::MatrixXd psi_matrix(const PsiSpec& spec, std::span<const double> pts, double sign)
{
    const auto n = static_cast<Eigen::Index>(pts.size());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            m(i, j) = eval_psi(spec, pts[static_cast<std::size_t>(i)] + sign * pts[static_cast<std::size_t>(j)]);
    return m;
}

std::vector<double> positive_part(const Grid& grid)
{
    auto pos = grid.select([](double t) { return t > 0.0; });
    if (pos.empty())
        throw DomainError("reflection negativity needs grid points in (0, inf)");
    return pos;
}

} // namespace

void LKTriple::validate() const
{
    if (!(a >= 0.0) || !std::isfinite(a))
        throw DomainError("LK triple: a must be finite and >= 0");
    if (!(b >= 0.0) || !std::isfinite(b))
        throw DomainError("LK triple: b must be finite and >= 0");
    std::set<double> seen;
    for (const auto& atom : atoms) {
        if (!(atom.lambda > 0.0) || !std::isfinite(atom.lambda))
            throw DomainError("LK triple: atom lambda must be finite and > 0");
        if (!(atom.weight > 0.0) || !std::isfinite(atom.weight))
            throw DomainError("LK triple: atom weight must be finite and > 0");
        if (!seen.insert(atom.lambda).second)
            throw DomainError("LK triple: atom lambdas must be distinct, repeated " + fmt(atom.lambda));
    }
}

double LKTriple::integrability() const
{
    double acc = 0.0;
    for (const auto& atom : atoms)
        acc += atom.weight * std::min(1.0, atom.lambda);
    return acc;
}

double lk_eval(const LKTriple& triple, double t)
{
    const double at = std::abs(t);
    double acc = triple.a + triple.b * at;
    for (const auto& atom : triple.atoms)
        acc += atom.weight * -std::expm1(-atom.lambda * at);
    return acc;
}

PsiSpec PsiSpec::power(double alpha)
{
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        throw DomainError("Power psi requires finite alpha >= 0");
    return {psi::Power{alpha}};
}

PsiSpec PsiSpec::absolute_value() { return {psi::AbsoluteValue{}}; }

PsiSpec PsiSpec::lk(LKTriple triple)
{
    triple.validate();
    return {psi::LK{std::move(triple)}};
}

PsiSpec PsiSpec::tabulated(std::span<const double> t, std::span<const double> values)
{
    if (t.size() != values.size() || t.empty())
        throw DomainError("Tabulated psi needs equally many t and psi values");
    auto table = std::make_shared<std::map<double, double>>();
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!std::isfinite(t[i]) || !std::isfinite(values[i]))
            throw DomainError("Tabulated psi values must be finite");
        if (!table->emplace(std::abs(t[i]), values[i]).second)
            throw DomainError("Tabulated psi t-values must be distinct, repeated |t| = " + fmt(std::abs(t[i])));
    }
    return {psi::Tabulated{std::move(table)}};
}

std::string PsiSpec::name() const
{
    return std::visit(overloaded{
                          [](const psi::Power& p) { return "Power(" + fmt(p.alpha) + ")"; },
                          [](const psi::AbsoluteValue&) { return std::string("AbsoluteValue"); },
                          [](const psi::LK&) { return std::string("LK"); },
                          [](const psi::Tabulated&) { return std::string("Tabulated"); },
                      },
                      variant);
}

double eval_psi(const PsiSpec& spec, double t)
{
    if (!std::isfinite(t))
        throw DomainError("psi argument must be finite");
    const double at = std::abs(t);
    return std::visit(overloaded{
                          [&](const psi::Power& p) {
                              if (p.alpha == 0.0)
                                  return at == 0.0 ? 0.0 : 1.0;
                              return std::pow(at, p.alpha);
                          },
                          [&](const psi::AbsoluteValue&) { return at; },
                          [&](const psi::LK& l) { return lk_eval(l.triple, at); },
                          [&](const psi::Tabulated& tab) {
                              auto it = tab.values->find(at);
                              if (it == tab.values->end())
                                  throw DomainError("Tabulated psi has no value at t = " + fmt(t));
                              return it->second;
                          },
                      },
                      spec.variant);
}

BernsteinReport check_bernstein(const PsiSpec& spec, const Grid& grid, BernsteinOptions opts)
{
    if (opts.k_max < 1)
        throw DomainError("check_bernstein: k_max must be >= 1");
    if (!(opts.tol > 0.0))
        throw DomainError("check_bernstein: tol must be > 0");
    for (double t : grid)
        if (!(t > 0.0))
            throw DomainError("check_bernstein: grid must lie in (0, inf), got " + fmt(t));
    double h = opts.h;
    if (!(h > 0.0)) {
        if (grid.size() < 2)
            throw DomainError("check_bernstein: step h required for a single-point grid");
        h = grid.min_spacing() / 10.0;
    }

    BernsteinReport rep;
    rep.max_order_checked = opts.k_max;
    rep.step = h;
    rep.worst_violation = std::numeric_limits<double>::infinity();
    const auto k_max = static_cast<std::size_t>(opts.k_max);
    std::vector<double> vals(k_max + 1), diff(k_max + 1);
    for (double t : grid) {
        double scale = 0.0;
        for (std::size_t i = 0; i <= k_max; ++i) {
            vals[i] = eval_psi(spec, t + static_cast<double>(i) * h);
            scale = std::max(scale, std::abs(vals[i]));
        }
        const double nonneg = vals[0] / std::max(1.0, std::abs(vals[0]));
        if (nonneg < rep.worst_violation) {
            rep.worst_violation = nonneg;
            rep.worst_order = 0;
            rep.worst_point = t;
        }
        if (scale == 0.0)
            scale = 1.0;
        diff = vals;
        for (std::size_t k = 1; k <= k_max; ++k) {
            for (std::size_t i = 0; i + k <= k_max; ++i)
                diff[i] = diff[i + 1] - diff[i];
            const double signed_diff = (k % 2 == 1 ? 1.0 : -1.0) * diff[0] / scale;
            if (signed_diff < rep.worst_violation) {
                rep.worst_violation = signed_diff;
                rep.worst_order = static_cast<int>(k);
                rep.worst_point = t;
            }
        }
    }
    rep.pass = rep.worst_violation >= -opts.tol;
    return rep;
}

ReflectionNegativeVerdict check_reflection_negative(const PsiSpec& spec, const Grid& grid, const ToleranceConfig& tol)
{
    const auto pos = positive_part(grid);
    ReflectionNegativeVerdict v;
    v.line = check_negative_definite(GramMatrix::from_matrix(psi_matrix(spec, grid.points(), -1.0), grid), tol);
    v.semigroup = check_negative_definite(GramMatrix::from_matrix(psi_matrix(spec, pos, 1.0), Grid(pos)), tol);
    v.nd_on_line = v.line.pass;
    v.nd_on_semigroup = v.semigroup.pass;
    v.pass = v.nd_on_line && v.nd_on_semigroup;
    return v;
}

std::vector<SchoenbergVerdict> schoenberg_bridge(const PsiSpec& spec, std::span<const double> lambdas,
                                                 const Grid& grid, const ToleranceConfig& tol)
{
    const auto pos = positive_part(grid);
    const Eigen::MatrixXd line = psi_matrix(spec, grid.points(), -1.0);
    const Eigen::MatrixXd semi = psi_matrix(spec, pos, 1.0);
    std::vector<SchoenbergVerdict> out;
    for (double lambda : lambdas) {
        if (!(lambda > 0.0) || !std::isfinite(lambda))
            throw DomainError("schoenberg_bridge: lambda must be a positive real");
        SchoenbergVerdict v;
        v.lambda = lambda;
        v.line = check_positive_semidefinite(GramMatrix::from_matrix((-lambda * line).array().exp().matrix(), grid), tol);
        v.semigroup =
            check_positive_semidefinite(GramMatrix::from_matrix((-lambda * semi).array().exp().matrix(), Grid(pos)), tol);
        v.pass = v.line.pass && v.semigroup.pass;
        out.push_back(v);
    }
    return out;
}

LKFit lk_fit(std::span<const double> t, std::span<const double> psi, std::span<const double> lambda_grid,
             const LKFitOptions& opts)
{
    if (t.size() != psi.size())
        throw DomainError("lk_fit: t and psi sample counts differ");
    if (t.size() < 2)
        throw DomainError("lk_fit: at least 2 samples required");
    std::set<double> seen_t, seen_l;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!(t[i] > 0.0) || !std::isfinite(t[i]) || !std::isfinite(psi[i]))
            throw DomainError("lk_fit: samples need finite t > 0 and finite psi");
        if (!seen_t.insert(t[i]).second)
            throw DomainError("lk_fit: sample t-values must be distinct, repeated " + fmt(t[i]));
    }
    for (double l : lambda_grid) {
        if (!(l > 0.0) || !std::isfinite(l))
            throw DomainError("lk_fit: lambda grid must be positive reals");
        if (!seen_l.insert(l).second)
            throw DomainError("lk_fit: lambda grid must be distinct, repeated " + fmt(l));
    }

    const auto m = static_cast<Eigen::Index>(t.size());
    const Eigen::Index offset = (opts.include_a ? 1 : 0) + (opts.include_b ? 1 : 0);
    const Eigen::Index cols = offset + static_cast<Eigen::Index>(lambda_grid.size());
    if (cols == 0)
        throw DomainError("lk_fit: no columns (empty lambda grid and no a/b terms)");
    Eigen::MatrixXd a(m, cols);
    Eigen::VectorXd y(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const double ti = t[static_cast<std::size_t>(i)];
        y(i) = psi[static_cast<std::size_t>(i)];
        Eigen::Index c = 0;
        if (opts.include_a)
            a(i, c++) = 1.0;
        if (opts.include_b)
            a(i, c++) = ti;
        for (double l : lambda_grid)
            a(i, c++) = -std::expm1(-l * ti);
    }
    // Positive column scaling keeps the constraint set x >= 0 and improves conditioning.
    const Eigen::VectorXd norms = a.colwise().norm().transpose();
    for (Eigen::Index c = 0; c < cols; ++c)
        if (norms(c) == 0.0)
            throw DomainError("lk_fit: degenerate zero column");
    const Eigen::MatrixXd scaled = a * norms.cwiseInverse().asDiagonal();
    const auto sol = nnls(scaled, y, opts.kkt_tol);
    const Eigen::VectorXd x = sol.x.cwiseQuotient(norms);

    LKFit fit;
    fit.converged = sol.converged;
    fit.residual = (a * x - y).norm();
    fit.lambda_grid.assign(lambda_grid.begin(), lambda_grid.end());
    Eigen::Index c = 0;
    if (opts.include_a)
        fit.triple.a = x(c++);
    if (opts.include_b)
        fit.triple.b = x(c++);
    double wmax = 0.0;
    for (std::size_t j = 0; j < lambda_grid.size(); ++j) {
        fit.grid_weights.push_back(x(offset + static_cast<Eigen::Index>(j)));
        wmax = std::max(wmax, fit.grid_weights.back());
    }
    for (std::size_t j = 0; j < lambda_grid.size(); ++j) {
        const double w = fit.grid_weights[j];
        if (w > 0.0 && w > opts.weight_floor * wmax)
            fit.triple.atoms.push_back({lambda_grid[j], w});
    }

    // Flags non-identifiability of the full design: the solver itself skips dependent columns,
    // so the support it returns is always well conditioned.
    if (cols > m) {
        fit.condition_number = std::numeric_limits<double>::infinity();
    } else {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled);
        const auto& sv = svd.singularValues();
        const double smin = sv(sv.size() - 1);
        fit.condition_number = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
    }
    fit.ill_conditioned = fit.condition_number > opts.max_condition;
    return fit;
}

} // namespace rpkit
