#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rpkit/grid.hpp"
#include "rpkit/kernel.hpp"

namespace rpkit {

namespace process {
struct BrownianTwoSided {};
struct FractionalBrownian {
    double hurst = 0.5;
};
struct BrownianOneSided {};
struct NormalizedOneSided {};
struct Custom {
    KernelSpec kernel;
};
} // namespace process

struct ProcessSpec {
    std::variant<process::BrownianTwoSided, process::FractionalBrownian, process::BrownianOneSided,
                 process::NormalizedOneSided, process::Custom>
        variant;

    static ProcessSpec brownian_two_sided();
    static ProcessSpec fractional_brownian(double hurst);
    static ProcessSpec brownian_one_sided();
    static ProcessSpec normalized_one_sided();
    static ProcessSpec custom(KernelSpec kernel);

    std::string name() const;
    /// Parameters for serialization, e.g. {"hurst": 0.3}.
    std::vector<std::pair<std::string, double>> params() const;
};

KernelSpec covariance_kernel(const ProcessSpec& p);

double covariance(const ProcessSpec& p, double s, double t);

/// D(s,t) = C(s,s) + C(t,t) - 2 C(s,t).
double increment_form(const ProcessSpec& p, double s, double t);

struct StationarityVerdict {
    bool pass = false;
    double max_deviation = 0.0;
    std::size_t pairs_checked = 0;
    bool degenerate = false; // fewer than 2 admissible shifted pairs
};

/// D(s+h, t+h) = D(s,t) within tol * max(1, |D(s,t)|) over grid pairs and shifts.
/// Default shifts: +/- (p_k - p_0). Shifted arguments outside the domain are skipped.
StationarityVerdict check_stationary_increments(const ProcessSpec& p, const Grid& grid, double tol = 1e-12,
                                                std::optional<std::vector<double>> shifts = std::nullopt);

/// Custom process with kernel C(s,t)/sqrt(C(s,s)C(t,t)).
ProcessSpec normalize_covariance(const ProcessSpec& p);

/// C(a s, a t) = C(s,t) for every scale a and grid pair.
StationarityVerdict check_dilation_stationarity(const Grid& grid, std::span<const double> scales, double tol = 1e-12,
                                                const ProcessSpec& p = ProcessSpec::normalized_one_sided());

} // namespace rpkit
