#pragma once

#include <vector>

#include <Eigen/Core>

#include "rpkit/gram.hpp"
#include "rpkit/kernel.hpp"
#include "rpkit/tolerance.hpp"

namespace rpkit {

/// Finite-sample OS quotient: the numerical range of the reflected Gram matrix.
struct OSQuotient {
    std::size_t rank = 0;
    std::vector<double> eigenvalues; // all eigenvalues, descending
    Eigen::MatrixXd factor;          // rank x n, factor^T factor ~ clipped reflected Gram
    double clipped_mass = 0.0;       // sum of |negative eigenvalues| discarded
    double reconstruction_error = 0.0;
};

/// RKHS feature map: n x rank matrix Gamma with Gamma Gamma^T ~ g (negative noise clipped).
/// Throws NotPositiveSemidefinite when g fails the PSD check.
Eigen::MatrixXd factorize_rkhs(const GramMatrix& g, const ToleranceConfig& tol = {});

/// Throws NotReflectionPositive if lambda_min < -psd_tol * scale.
OSQuotient os_quotient(const GramMatrix& g_tau, const ToleranceConfig& tol = {});

struct HatContraction {
    double operator_norm = 0.0;
    bool contraction = true;
    std::size_t rank = 0;
    double consistency_error = 0.0; // worst residual of the least-squares descent
    Eigen::MatrixXd matrix;         // rank x rank matrix of the induced map in quotient coordinates
};

/// Matrix of the shift by `shift` > 0 induced on the quotient of the positive
/// half-line. Exponential kernels shift kernel sections; covariance kernels of
/// processes with stationary increments (BrownianTwoSided, FractionalBrownian)
/// use the linear part of the affine action, beta_p -> beta_{p+s} - beta_s.
/// Throws InconsistentQuotient when shifted vectors leave the quotient span.
HatContraction hat_contraction(const KernelSpec& spec, const ReflectionSetup& setup, double shift,
                               const ToleranceConfig& tol = {});

} // namespace rpkit
