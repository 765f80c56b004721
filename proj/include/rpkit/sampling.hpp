#pragma once

#include <string>

#include <Eigen/Core>

#include "rpkit/grid.hpp"
#include "rpkit/process.hpp"
#include "rpkit/rng.hpp"

namespace rpkit {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Seeded ensemble of centered Gaussian paths on a grid.
struct PathEnsemble {
    Grid grid;
    RowMatrix paths; // n_paths x grid size, one path per row
    RandomSeed seed;
    ProcessSpec target;
    std::string generator{kGeneratorName};
    double jitter = 0.0; // diagonal jitter added before Cholesky
};

inline constexpr std::size_t kMaxDenseGrid = 4096;

/// Lower Cholesky factor of the covariance Gram on grid with jitter escalation
/// (0, then eps * mean(diag) for eps = 1e-12 .. 1e-6). Custom kernels are PSD-checked first.
/// Throws FactorizationError with lambda_min when the jitter is exhausted.
Eigen::MatrixXd covariance_factor(const ProcessSpec& p, const Grid& grid, double* jitter_used = nullptr);

PathEnsemble sample_paths(const ProcessSpec& p, const Grid& grid, std::size_t n_paths, RandomSeed seed);

struct EmpiricalCovariance {
    Eigen::MatrixXd matrix;
    double max_abs_deviation = 0.0; // against the target Gram on the ensemble grid
};

/// (1/M) sum x x^T; with subtract_mean, the sample mean is removed first. M >= 2.
EmpiricalCovariance empirical_covariance(const PathEnsemble& e, bool subtract_mean = false);

namespace reference {

PathEnsemble sample_paths_serial(const ProcessSpec& p, const Grid& grid, std::size_t n_paths, RandomSeed seed);
EmpiricalCovariance empirical_covariance_serial(const PathEnsemble& e, bool subtract_mean = false);

} // namespace reference

} // namespace rpkit
