#pragma once

#include <algorithm>
#include <cmath>

#include "rpkit/errors.hpp"

namespace rpkit {

/// Relative tolerances; each is multiplied by max(1, |lambda|_max) of the matrix at hand.
struct ToleranceConfig {
    double psd_tol = 1e-9;
    double nd_tol = 1e-9;
    double rank_tol = 1e-10;
    double recon_tol = 1e-8;

    void validate() const
    {
        for (double v : {psd_tol, nd_tol, rank_tol, recon_tol}) {
            if (!(v > 0.0) || !std::isfinite(v))
                throw DomainError("tolerances must be finite and strictly positive");
        }
    }
};

inline double tolerance_scale(double max_abs_eigenvalue)
{
    return std::max(1.0, max_abs_eigenvalue);
}

} // namespace rpkit
