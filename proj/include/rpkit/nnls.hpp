#pragma once

#include <Eigen/Core>
#include <vector>

namespace rpkit {

struct NnlsResult {
    Eigen::VectorXd x;
    double residual = 0.0; // ||A x - b||_2
    int iterations = 0;
    bool converged = false;
    std::vector<Eigen::Index> passive; // indices with x_j > 0
};

/// min ||A x - b||_2 subject to x >= 0, Lawson-Hanson active set.
/// Terminates when max_j (A^T (b - A x))_j over the active set is <= kkt_tol * ||A^T b||_inf.
NnlsResult nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double kkt_tol = 1e-12, int max_iterations = 0);

} // namespace rpkit
