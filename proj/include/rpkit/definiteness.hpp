#pragma once

#include "rpkit/gram.hpp"
#include "rpkit/tolerance.hpp"

namespace rpkit {

struct PsdVerdict {
    bool pass = false;
    double min_eigenvalue = 0.0;
    double max_abs_eigenvalue = 0.0;
    double tolerance = 0.0; // absolute threshold actually applied
};

struct NdVerdict {
    bool pass = false;
    double max_projected_eigenvalue = 0.0;
    double tolerance = 0.0;
    bool degenerate = false; // n < 2: the constraint set sum c = 0 is {0}
};

/// pass iff lambda_min(g) >= -psd_tol * max(1, |lambda|_max).
PsdVerdict check_positive_semidefinite(const GramMatrix& g, const ToleranceConfig& tol = {});

/// Negative definiteness on {sum c = 0} via the centering projection P g P,
/// P = I - 11^T/n: pass iff lambda_max(PgP) <= nd_tol * max(1, |lambda|_max(PgP)).
NdVerdict check_negative_definite(const GramMatrix& g, const ToleranceConfig& tol = {});

/// Ascending eigenvalues of a symmetric matrix; NumericalError on solver failure.
Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& m);

} // namespace rpkit
