#include "rpkit/quotient.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "rpkit/errors.hpp"

namespace rpkit {

namespace {

struct Spectral {
    Eigen::VectorXd values;  // descending
    Eigen::MatrixXd vectors; // columns match values
    double scale = 1.0;
};

Spectral spectral(const Eigen::MatrixXd& m)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    if (es.info() != Eigen::Success) {
        std::ostringstream os;
        os << "eigensolve failed: n = " << m.rows() << ", frobenius = " << m.norm();
        throw NumericalError(os.str());
    }
    Spectral s;
    s.values = es.eigenvalues().reverse();
    s.vectors = es.eigenvectors().rowwise().reverse();
    s.scale = tolerance_scale(s.values.cwiseAbs().maxCoeff());
    return s;
}

std::size_t retained_rank(const Spectral& s, const ToleranceConfig& tol)
{
    const double top = s.values(0);
    if (!(top > tol.psd_tol))
        return 0;
    std::size_t r = 0;
    while (r < static_cast<std::size_t>(s.values.size()) && s.values(static_cast<Eigen::Index>(r)) > tol.rank_tol * top)
        ++r;
    return r;
}

double clipped_mass(const Spectral& s)
{
    double mass = 0.0;
    for (double v : s.values)
        if (v < 0.0)
            mass += -v;
    return mass;
}

// rank x n factor Q = Lambda_r^{1/2} U_r^T, plus its reconstruction error against the clipped matrix.
std::pair<Eigen::MatrixXd, double> quotient_factor(const Spectral& s, std::size_t rank, const ToleranceConfig& tol)
{
    const auto n = s.values.size();
    const auto r = static_cast<Eigen::Index>(rank);
    Eigen::MatrixXd q = s.values.head(r).cwiseSqrt().asDiagonal() * s.vectors.leftCols(r).transpose();
    const Eigen::MatrixXd clipped =
        s.vectors * s.values.cwiseMax(0.0).asDiagonal() * s.vectors.transpose();
    const double err = n == 0 ? 0.0 : (q.transpose() * q - clipped).cwiseAbs().maxCoeff();
    if (err > tol.recon_tol * s.scale) {
        std::ostringstream os;
        os << "factor reconstruction error " << err << " exceeds " << tol.recon_tol * s.scale;
        throw NumericalError(os.str());
    }
    return {std::move(q), err};
}

// Finite linear combination sum_k c_k K_{p_k} of kernel sections.
using Combination = std::vector<std::pair<double, double>>;

double reflected_inner(const KernelSpec& spec, Reflection r, const Combination& x, const Combination& y)
{
    double acc = 0.0;
    for (const auto& [cx, px] : x)
        for (const auto& [cy, py] : y)
            acc += cx * cy * eval_kernel(spec, reflect_point(r, px), py);
    return acc;
}

enum class ShiftAction { Section, Increment };

ShiftAction shift_action(const KernelSpec& spec)
{
    if (std::holds_alternative<kernels::Exponential>(spec.variant))
        return ShiftAction::Section;
    if (std::holds_alternative<kernels::BrownianTwoSided>(spec.variant) ||
        std::holds_alternative<kernels::FractionalBrownian>(spec.variant))
        return ShiftAction::Increment;
    throw DomainError("hat_contraction requires a translation-covariant kernel on the line, got " + spec.name());
}

Combination apply_shift(ShiftAction action, double p, double shift)
{
    if (action == ShiftAction::Section)
        return {{1.0, p + shift}};
    return {{1.0, p + shift}, {-1.0, shift}};
}

} // namespace

Eigen::MatrixXd factorize_rkhs(const GramMatrix& g, const ToleranceConfig& tol)
{
    tol.validate();
    if (g.size() == 0)
        throw DomainError("factorize_rkhs: empty Gram matrix");
    const auto s = spectral(g.entries);
    const double lmin = s.values(s.values.size() - 1);
    if (lmin < -tol.psd_tol * s.scale) {
        std::ostringstream os;
        os << "Gram matrix is not positive semidefinite: lambda_min = " << lmin;
        throw NotPositiveSemidefinite(os.str(), lmin);
    }
    auto [q, err] = quotient_factor(s, retained_rank(s, tol), tol);
    return q.transpose();
}

OSQuotient os_quotient(const GramMatrix& g_tau, const ToleranceConfig& tol)
{
    tol.validate();
    if (g_tau.size() == 0)
        throw DomainError("os_quotient: empty Gram matrix");
    const auto s = spectral(g_tau.entries);
    const double lmin = s.values(s.values.size() - 1);
    if (lmin < -tol.psd_tol * s.scale) {
        std::ostringstream os;
        os << "not reflection positive: lambda_min = " << lmin;
        throw NotReflectionPositive(os.str(), lmin);
    }
    OSQuotient out;
    out.rank = retained_rank(s, tol);
    out.eigenvalues.assign(s.values.data(), s.values.data() + s.values.size());
    out.clipped_mass = clipped_mass(s);
    auto [q, err] = quotient_factor(s, out.rank, tol);
    out.factor = std::move(q);
    out.reconstruction_error = err;
    return out;
}

HatContraction hat_contraction(const KernelSpec& spec, const ReflectionSetup& setup, double shift,
                               const ToleranceConfig& tol)
{
    tol.validate();
    if (!(shift > 0.0) || !std::isfinite(shift))
        throw DomainError("hat_contraction: shift must be a positive real");
    if (setup.reflection != Reflection::Negation)
        throw DomainError("hat_contraction acts on the line (R, R+, -id)");
    for (double p : setup.positive_part)
        if (!(p > 0.0))
            throw DomainError("hat_contraction: positive part must lie in (0, inf)");
    const auto action = shift_action(spec);

    const auto g_tau = reflected_gram(spec, setup);
    const auto s = spectral(g_tau.entries);
    const double lmin = s.values(s.values.size() - 1);
    if (lmin < -tol.psd_tol * s.scale) {
        std::ostringstream os;
        os << "not reflection positive: lambda_min = " << lmin;
        throw NotReflectionPositive(os.str(), lmin);
    }
    HatContraction out;
    out.rank = retained_rank(s, tol);
    if (out.rank == 0) {
        out.matrix = Eigen::MatrixXd(0, 0);
        return out;
    }

    const auto& pts = setup.positive_part;
    const auto n = static_cast<Eigen::Index>(pts.size());
    const auto r = static_cast<Eigen::Index>(out.rank);
    std::vector<Combination> base(pts.size()), moved(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        base[i] = {{1.0, pts[i]}};
        moved[i] = apply_shift(action, pts[i], shift);
    }
    Eigen::MatrixXd cross(n, n), self(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
            cross(i, j) = reflected_inner(spec, setup.reflection, base[ui], moved[uj]);
            self(i, j) = reflected_inner(spec, setup.reflection, moved[ui], moved[uj]);
        }
    }
    self = 0.5 * (self + self.transpose());

    const Eigen::VectorXd inv_sqrt = s.values.head(r).cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd u = s.vectors.leftCols(r);
    const Eigen::MatrixXd q = s.values.head(r).cwiseSqrt().asDiagonal() * u.transpose();
    // Coordinates of the shifted vectors: least squares solution of Q^T c_j = cross(:, j).
    const Eigen::MatrixXd coords = inv_sqrt.asDiagonal() * u.transpose() * cross;
    const double cross_err = (q.transpose() * coords - cross).cwiseAbs().maxCoeff();
    const double self_err = (coords.transpose() * coords - self).cwiseAbs().maxCoeff();
    out.consistency_error = std::max(cross_err, self_err);
    if (out.consistency_error > tol.recon_tol * s.scale) {
        std::ostringstream os;
        os << "shift does not descend to quotient: residual " << out.consistency_error << " exceeds "
           << tol.recon_tol * s.scale;
        throw InconsistentQuotient(os.str());
    }
    // A Q = coords with Q of full row rank: A = coords Q^+ = coords U Lambda^{-1/2}.
    out.matrix = coords * u * inv_sqrt.asDiagonal();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(out.matrix);
    out.operator_norm = svd.singularValues()(0);
    out.contraction = out.operator_norm <= 1.0 + tol.psd_tol;
    return out;
}

} // namespace rpkit
