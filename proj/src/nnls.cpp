#include "rpkit/nnls.hpp"

#include <algorithm>
#include <limits>

#include <Eigen/QR>

#include "rpkit/errors.hpp"

namespace rpkit {

namespace {

Eigen::VectorXd solve_passive(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                              const std::vector<Eigen::Index>& passive)
{
    Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(passive.size()));
    for (std::size_t k = 0; k < passive.size(); ++k)
        sub.col(static_cast<Eigen::Index>(k)) = a.col(passive[k]);
    return sub.completeOrthogonalDecomposition().solve(b);
}

} // namespace

NnlsResult nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double kkt_tol, int max_iterations)
{
    if (a.rows() != b.size())
        throw DomainError("nnls: dimension mismatch");
    const Eigen::Index n = a.cols();
    if (max_iterations <= 0)
        max_iterations = static_cast<int>(30 * std::max<Eigen::Index>(n, 1));

    NnlsResult res;
    res.x = Eigen::VectorXd::Zero(n);
    std::vector<bool> in_passive(static_cast<std::size_t>(n), false);
    const double gscale = std::max((a.transpose() * b).cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());

    auto passive_list = [&] {
        std::vector<Eigen::Index> p;
        for (Eigen::Index j = 0; j < n; ++j)
            if (in_passive[static_cast<std::size_t>(j)])
                p.push_back(j);
        return p;
    };

    std::vector<bool> rejected(static_cast<std::size_t>(n), false);
    while (res.iterations < max_iterations) {
        const Eigen::VectorXd w = a.transpose() * (b - a * res.x);
        Eigen::Index best = -1;
        double best_w = kkt_tol * gscale;
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto uj = static_cast<std::size_t>(j);
            if (!in_passive[uj] && !rejected[uj] && w(j) > best_w) {
                best_w = w(j);
                best = j;
            }
        }
        if (best < 0) {
            res.converged = true;
            break;
        }
        in_passive[static_cast<std::size_t>(best)] = true;
        bool first = true;

        // Inner loop: step toward the unconstrained passive-set solution until it is feasible.
        while (res.iterations < max_iterations) {
            ++res.iterations;
            const auto p = passive_list();
            const Eigen::VectorXd z = solve_passive(a, b, p);
            Eigen::Index blocking = -1;
            double alpha = 1.0;
            for (std::size_t k = 0; k < p.size(); ++k) {
                const double zk = z(static_cast<Eigen::Index>(k));
                if (zk <= 0.0) {
                    const double xk = res.x(p[k]);
                    const double step = xk / (xk - zk);
                    if (blocking < 0 || step < alpha) {
                        alpha = step;
                        blocking = static_cast<Eigen::Index>(k);
                    }
                }
            }
            if (blocking < 0) {
                res.x.setZero();
                for (std::size_t k = 0; k < p.size(); ++k)
                    res.x(p[k]) = z(static_cast<Eigen::Index>(k));
                std::fill(rejected.begin(), rejected.end(), false);
                break;
            }
            if (first && p[static_cast<std::size_t>(blocking)] == best && res.x(best) == 0.0) {
                // Entering column is numerically dependent on the passive set; skip it this round.
                in_passive[static_cast<std::size_t>(best)] = false;
                rejected[static_cast<std::size_t>(best)] = true;
                break;
            }
            first = false;
            for (std::size_t k = 0; k < p.size(); ++k) {
                const double zk = z(static_cast<Eigen::Index>(k));
                double& xk = res.x(p[k]);
                xk += alpha * (zk - xk);
                if (static_cast<Eigen::Index>(k) == blocking || xk <= 0.0) {
                    xk = 0.0;
                    in_passive[static_cast<std::size_t>(p[k])] = false;
                }
            }
        }
    }
    res.passive = passive_list();
    res.residual = (a * res.x - b).norm();
    return res;
}

} // namespace rpkit
