#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "rpkit/grid.hpp"
#include "rpkit/kernel.hpp"

namespace rpkit {

struct GramMatrix {
    Eigen::MatrixXd entries;
    std::optional<Grid> grid; // empty for vector-indexed (GaussianFock) Gram matrices
    bool symmetrized = false;

    std::size_t size() const { return static_cast<std::size_t>(entries.rows()); }

    /// Wraps a square matrix, replacing it by (M + M^T)/2.
    static GramMatrix from_matrix(const Eigen::MatrixXd& m, std::optional<Grid> grid = std::nullopt);
};

enum class Reflection {
    Negation,  // t -> -t, the line (R, R+, -id)
    Inversion, // t -> 1/t, the dilation group on (0, inf)
    Identity,
};

double reflect_point(Reflection r, double t);

/// (X, X+, tau) restricted to a finite positive part.
struct ReflectionSetup {
    Reflection reflection = Reflection::Negation;
    Grid positive_part;

    ReflectionSetup(Reflection r, Grid positive);
};

GramMatrix gram(const KernelSpec& spec, const Grid& grid);
GramMatrix gram(const KernelSpec& spec, std::span<const Eigen::VectorXd> points);

/// entries(i,j) = K(tau p_i, p_j) over the positive part.
GramMatrix reflected_gram(const KernelSpec& spec, const ReflectionSetup& setup);

namespace reference {

/// Single-threaded Gram assembly, bit-identical to gram().
GramMatrix gram_serial(const KernelSpec& spec, const Grid& grid);

} // namespace reference

} // namespace rpkit
