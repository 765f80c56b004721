#pragma once

#include <span>

#include "rpkit/kernel.hpp"
#include "rpkit/step_function.hpp"

namespace rpkit {

enum class CocycleKind {
    Brownian,          // b_t = sgn(t) chi_[t^0, t v 0], translations of (R, +)
    OneSidedIndicator, // b_t = chi_[0, t], t > 0
};

StepFunction cocycle(CocycleKind kind, double t);

/// Normalized one-sided element t^{-1/2} chi_[0, t].
StepFunction normalized_indicator(double t);

/// Dilation-group cocycle beta_a = U_a b~_1 - b~_1 for a > 0, U_a = dilate_by(., a).
StepFunction dilation_cocycle(double a);

/// Exact ||cocycle(kind, t)||^2; |t| for the Brownian variant.
double psi_of(CocycleKind kind, double t);

struct CocycleVerdict {
    bool pass = false;
    double distance = 0.0; // L^2 distance between the two sides
};

/// Brownian: b_{s+t} = b_s + S_s b_t. OneSidedIndicator: the dilation picture,
/// beta_{st} = beta_s + U_s beta_t for s, t > 0.
CocycleVerdict check_cocycle_identity(CocycleKind kind, double s, double t, double tol = 1e-14);

/// theta b_t = b_{-t} with theta = reflect_odd (Brownian variant only).
CocycleVerdict check_theta_equivariance(CocycleKind kind, double t, double tol = 1e-14);

struct DualityVerdict {
    bool pass = false;
    double covariance_error = 0.0; // |<b_s, b_t> - (psi(s) + psi(t) - psi(s^{-1} t)) / 2|
    double increment_error = 0.0;  // |psi(s^{-1} t) - ||b_s - b_t||^2|
};

/// Brownian: s^{-1}t = t - s. OneSidedIndicator: the realization chi_[0,t] with
/// independent increments (psi(|t - s|)) and, for the same pair, the dilation cocycle
/// with s^{-1}t = t / s; pass requires both pictures.
DualityVerdict check_duality(CocycleKind kind, double s, double t, double tol = 1e-14);

struct HatTrivialityVerdict {
    bool all_orthogonal = true;
    double max_abs_inner = 0.0;
    bool degenerate = false; // empty grid: vacuous
};

/// <b_s, b_{-t}> = 0 for all s, t in a positive grid (Brownian variant only).
HatTrivialityVerdict check_hat_triviality(CocycleKind kind, std::span<const double> s_grid, double tol = 1e-14);

/// Same diagnostic from covariance values C(s, -t) of a kernel.
HatTrivialityVerdict check_hat_triviality(const KernelSpec& covariance, std::span<const double> s_grid,
                                          double tol = 1e-14);

} // namespace rpkit
