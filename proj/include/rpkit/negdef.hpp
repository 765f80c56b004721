#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rpkit/definiteness.hpp"
#include "rpkit/grid.hpp"
#include "rpkit/tolerance.hpp"

namespace rpkit {

struct LKAtom {
    double lambda = 1.0;
    double weight = 0.0;
};

/// psi(t) = a + b|t| + sum_i w_i (1 - e^{-lambda_i |t|}): Levy-Khintchine data with a discrete measure.
struct LKTriple {
    double a = 0.0;
    double b = 0.0;
    std::vector<LKAtom> atoms;

    /// a, b >= 0; lambda_i > 0 distinct; w_i > 0.
    void validate() const;
    /// sum_i w_i min(1, lambda_i)
    double integrability() const;
};

double lk_eval(const LKTriple& triple, double t);

namespace psi {

struct Power {
    double alpha = 1.0;
};
struct AbsoluteValue {};
struct LK {
    LKTriple triple;
};
struct Tabulated {
    std::shared_ptr<const std::map<double, double>> values; // keyed by |t|
};

} // namespace psi

struct PsiSpec {
    std::variant<psi::Power, psi::AbsoluteValue, psi::LK, psi::Tabulated> variant;

    static PsiSpec power(double alpha);
    static PsiSpec absolute_value();
    static PsiSpec lk(LKTriple triple);
    /// Pairs (t_i, psi_i); t values distinct in |t|. Evaluation is exact lookup only.
    static PsiSpec tabulated(std::span<const double> t, std::span<const double> values);

    std::string name() const;
};

/// Even in t. Power(0) is 0 at t = 0 and 1 elsewhere.
double eval_psi(const PsiSpec& spec, double t);

struct BernsteinOptions {
    double h = 0.0;   // <= 0: min grid spacing / 10
    int k_max = 8;
    double tol = 1e-7;
};

struct BernsteinReport {
    int max_order_checked = 0;
    double worst_violation = 0.0; // most negative scaled (-1)^{k-1} Delta_h^k psi (or scaled psi for k = 0)
    int worst_order = 0;
    double worst_point = 0.0;
    double step = 0.0;
    bool pass = false;
};

/// Forward-difference surrogate of psi >= 0, (-1)^{k-1} psi^{(k)} >= 0 on a grid in (0, inf).
/// Each difference is scaled by max(|psi|) over its stencil.
BernsteinReport check_bernstein(const PsiSpec& spec, const Grid& grid, BernsteinOptions opts = {});

struct ReflectionNegativeVerdict {
    NdVerdict line;      // psi(s_i - s_j) over the whole grid
    NdVerdict semigroup; // psi(s_i + s_j) over grid ∩ (0, inf)
    bool nd_on_line = false;
    bool nd_on_semigroup = false;
    bool pass = false;
};

ReflectionNegativeVerdict check_reflection_negative(const PsiSpec& spec, const Grid& grid,
                                                    const ToleranceConfig& tol = {});

struct SchoenbergVerdict {
    double lambda = 0.0;
    PsdVerdict line;      // e^{-lambda psi(s_i - s_j)}
    PsdVerdict semigroup; // e^{-lambda psi(s_i + s_j)} on the positive part
    bool pass = false;
};

std::vector<SchoenbergVerdict> schoenberg_bridge(const PsiSpec& spec, std::span<const double> lambdas,
                                                 const Grid& grid, const ToleranceConfig& tol = {});

struct LKFitOptions {
    bool include_a = true;
    bool include_b = true;
    double weight_floor = 1e-10; // relative to the largest fitted atom weight
    double max_condition = 1e12;
    double kkt_tol = 1e-12;
};

struct LKFit {
    LKTriple triple;
    double residual = 0.0;
    double condition_number = 0.0; // of the full unit-normalized design matrix
    bool ill_conditioned = false;  // condition_number > max_condition: fit not unique
    bool converged = false;
    std::vector<double> lambda_grid;
    std::vector<double> grid_weights; // fitted weight per lambda_grid entry, before the floor
};

LKFit lk_fit(std::span<const double> t, std::span<const double> psi, std::span<const double> lambda_grid,
             const LKFitOptions& opts = {});

} // namespace rpkit
