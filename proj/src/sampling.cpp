#include "rpkit/sampling.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Cholesky>

#include "parallel_for.hpp"
#include "rpkit/definiteness.hpp"
#include "rpkit/errors.hpp"
#include "rpkit/gram.hpp"

namespace rpkit {

namespace {

auto parallel_loop = [](std::int64_t n, auto&& body) { detail::parallel_for(n, body); };
auto serial_loop = [](std::int64_t n, auto&& body) { detail::serial_for(n, body); };

template <class Loop>
PathEnsemble sample_impl(const ProcessSpec& p, const Grid& grid, std::size_t n_paths, RandomSeed seed, Loop loop)
{
    if (n_paths < 1)
        throw DomainError("sample_paths: n_paths must be >= 1");
    double jitter = 0.0;
    const Eigen::MatrixXd l = covariance_factor(p, grid, &jitter);
    const auto n = static_cast<Eigen::Index>(grid.size());

    PathEnsemble e{grid, RowMatrix(static_cast<Eigen::Index>(n_paths), n), seed, p};
    e.jitter = jitter;
    const auto blocks = static_cast<std::int64_t>((n_paths + kPathBlock - 1) / kPathBlock);
    loop(blocks, [&](std::int64_t b) {
        auto engine = block_engine(seed, Stream::Paths, static_cast<std::uint64_t>(b));
        std::normal_distribution<double> normal;
        Eigen::VectorXd z(n);
        const auto first = static_cast<std::size_t>(b) * kPathBlock;
        const auto last = std::min(n_paths, first + kPathBlock);
        for (std::size_t row = first; row < last; ++row) {
            for (Eigen::Index j = 0; j < n; ++j)
                z(j) = normal(engine);
            for (Eigen::Index i = 0; i < n; ++i) {
                double acc = 0.0;
                for (Eigen::Index j = 0; j <= i; ++j)
                    acc += l(i, j) * z(j);
                e.paths(static_cast<Eigen::Index>(row), i) = acc;
            }
        }
    });
    return e;
}

template <class Loop>
EmpiricalCovariance covariance_impl(const PathEnsemble& e, bool subtract_mean, Loop loop)
{
    const auto m = e.paths.rows();
    const auto n = e.paths.cols();
    if (m < 2)
        throw DomainError("empirical_covariance: at least 2 paths required");
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(n);
    if (subtract_mean) {
        for (Eigen::Index r = 0; r < m; ++r)
            mean += e.paths.row(r).transpose();
        mean /= static_cast<double>(m);
    }
    EmpiricalCovariance out;
    out.matrix.resize(n, n);
    loop(static_cast<std::int64_t>(n), [&](std::int64_t ii) {
        const auto i = static_cast<Eigen::Index>(ii);
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(i + 1);
        for (Eigen::Index r = 0; r < m; ++r) {
            const double xi = e.paths(r, i) - mean(i);
            for (Eigen::Index j = 0; j <= i; ++j)
                acc(j) += xi * (e.paths(r, j) - mean(j));
        }
        for (Eigen::Index j = 0; j <= i; ++j)
            out.matrix(i, j) = acc(j) / static_cast<double>(m);
    });
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            out.matrix(i, j) = out.matrix(j, i);
    const auto target = gram(covariance_kernel(e.target), e.grid);
    out.max_abs_deviation = (out.matrix - target.entries).cwiseAbs().maxCoeff();
    return out;
}

} // namespace

Eigen::MatrixXd covariance_factor(const ProcessSpec& p, const Grid& grid, double* jitter_used)
{
    if (grid.size() > kMaxDenseGrid)
        throw DomainError("dense sampling is capped at 4096 grid points");
    const auto g = gram(covariance_kernel(p), grid);
    if (std::holds_alternative<process::Custom>(p.variant)) {
        const auto verdict = check_positive_semidefinite(g);
        if (!verdict.pass) {
            std::ostringstream os;
            os << "custom covariance is not positive semidefinite: lambda_min = " << verdict.min_eigenvalue;
            throw NotPositiveSemidefinite(os.str(), verdict.min_eigenvalue);
        }
    }
    const auto n = g.entries.rows();
    if (jitter_used)
        *jitter_used = 0.0;
    if (g.entries.cwiseAbs().maxCoeff() == 0.0)
        return Eigen::MatrixXd::Zero(n, n);
    const double mean_diag = g.entries.diagonal().mean();
    for (double eps = 0.0; eps <= 1e-6 * (1.0 + 1e-9); eps = (eps == 0.0 ? 1e-12 : eps * 10.0)) {
        const double add = eps * mean_diag;
        Eigen::MatrixXd m = g.entries;
        m.diagonal().array() += add;
        Eigen::LLT<Eigen::MatrixXd> llt(m);
        if (llt.info() == Eigen::Success) {
            Eigen::MatrixXd l = llt.matrixL();
            if (l.allFinite()) {
                if (jitter_used)
                    *jitter_used = add;
                return l;
            }
        }
    }
    const double lmin = symmetric_eigenvalues(g.entries)(0);
    std::ostringstream os;
    os << "Cholesky failed with maximal jitter 1e-6*mean(diag): lambda_min = " << lmin;
    throw FactorizationError(os.str(), lmin);
}

PathEnsemble sample_paths(const ProcessSpec& p, const Grid& grid, std::size_t n_paths, RandomSeed seed)
{
    return sample_impl(p, grid, n_paths, seed, parallel_loop);
}

EmpiricalCovariance empirical_covariance(const PathEnsemble& e, bool subtract_mean)
{
    return covariance_impl(e, subtract_mean, parallel_loop);
}

namespace reference {

PathEnsemble sample_paths_serial(const ProcessSpec& p, const Grid& grid, std::size_t n_paths, RandomSeed seed)
{
    return sample_impl(p, grid, n_paths, seed, serial_loop);
}

EmpiricalCovariance empirical_covariance_serial(const PathEnsemble& e, bool subtract_mean)
{
    return covariance_impl(e, subtract_mean, serial_loop);
}

} // namespace reference

} // namespace rpkit
