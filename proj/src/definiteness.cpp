#include "rpkit/definiteness.hpp"

#include <sstream>

#include <Eigen/Eigenvalues>

namespace rpkit {

Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& m)
{
    if (m.size() == 0)
        return Eigen::VectorXd();
    if (!m.allFinite())
        throw NumericalError("eigensolve: matrix has non-finite entries");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        std::ostringstream os;
        os << "eigensolve failed: n = " << m.rows() << ", max|entry| = " << m.cwiseAbs().maxCoeff()
           << ", frobenius = " << m.norm();
        throw NumericalError(os.str());
    }
    return es.eigenvalues();
}

PsdVerdict check_positive_semidefinite(const GramMatrix& g, const ToleranceConfig& tol)
{
    tol.validate();
    const auto ev = symmetric_eigenvalues(g.entries);
    PsdVerdict v;
    v.min_eigenvalue = ev(0);
    v.max_abs_eigenvalue = ev.cwiseAbs().maxCoeff();
    v.tolerance = tol.psd_tol * tolerance_scale(v.max_abs_eigenvalue);
    v.pass = v.min_eigenvalue >= -v.tolerance;
    return v;
}

NdVerdict check_negative_definite(const GramMatrix& g, const ToleranceConfig& tol)
{
    tol.validate();
    NdVerdict v;
    const auto n = g.entries.rows();
    if (n < 2) {
        v.degenerate = true;
        v.pass = true;
        v.tolerance = tol.nd_tol;
        return v;
    }
    const Eigen::MatrixXd p =
        Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
    Eigen::MatrixXd centered = p * g.entries * p;
    centered = 0.5 * (centered + centered.transpose());
    const auto ev = symmetric_eigenvalues(centered);
    v.max_projected_eigenvalue = ev(n - 1);
    v.tolerance = tol.nd_tol * tolerance_scale(ev.cwiseAbs().maxCoeff());
    v.pass = v.max_projected_eigenvalue <= v.tolerance;
    return v;
}

} // namespace rpkit
