#pragma once

#include <memory>
#include <span>
#include <string>
#include <variant>

#include <Eigen/Core>

#include "rpkit/grid.hpp"

namespace rpkit {

struct KernelSpec;

namespace kernels {

/// e^{-lambda|s-t|}
struct Exponential {
    double lambda = 1.0;
};

/// 1/2 (|s| + |t| - |s-t|)
struct BrownianTwoSided {};

/// 1/2 (|s|^{2H} + |t|^{2H} - |s-t|^{2H}), H in (0,1)
struct FractionalBrownian {
    double hurst = 0.5;
};

/// s ^ t on (0, inf)
struct BrownianOneSided {};

/// sqrt((s ^ t) / (s v t)) on (0, inf)
struct NormalizedOneSided {};

/// e^{-|x-y|^2 / 2} on R^d
struct GaussianFock {};

/// Symmetric table on a grid; evaluation only at grid points.
struct Table {
    Grid grid;
    Eigen::MatrixXd values;
    double asymmetry = 0.0; // max |M - M^T| / max(1, max|M|) before symmetrization
};

struct Tabulated {
    std::shared_ptr<const Table> table;
};

/// C(s,t) / sqrt(C(s,s) C(t,t)) of a base kernel.
struct Normalized {
    std::shared_ptr<const KernelSpec> base;
};

} // namespace kernels

struct KernelSpec {
    using Variant = std::variant<kernels::Exponential, kernels::BrownianTwoSided,
                                 kernels::FractionalBrownian, kernels::BrownianOneSided,
                                 kernels::NormalizedOneSided, kernels::GaussianFock,
                                 kernels::Tabulated, kernels::Normalized>;
    Variant variant;

    static KernelSpec exponential(double lambda);
    static KernelSpec brownian_two_sided();
    static KernelSpec fractional_brownian(double hurst);
    static KernelSpec brownian_one_sided();
    static KernelSpec normalized_one_sided();
    static KernelSpec gaussian_fock();
    /// Symmetrizes the matrix; asymmetry above 1e-6 relative is a DomainError.
    static KernelSpec tabulated(Grid grid, const Eigen::MatrixXd& values);
    static KernelSpec normalized(KernelSpec base);

    std::string name() const;
};

/// Scalar kernels on the real line (GaussianFock treats scalars as 1-vectors).
double eval_kernel(const KernelSpec& spec, double s, double t);

/// Vector arguments; scalar kernels require 1-vectors.
double eval_kernel(const KernelSpec& spec, std::span<const double> x, std::span<const double> y);

} // namespace rpkit
