#pragma once

#include <complex>
#include <cstddef>
#include <span>

#include "rpkit/rng.hpp"

namespace rpkit {

struct MCReport {
    std::complex<double> estimate;
    double target = 0.0;
    double abs_error = 0.0;  // |estimate - target|
    std::size_t n_samples = 0;
    double half_width = 0.0; // 3 / sqrt(n) times the statistic's a-priori bound

    bool pass() const { return abs_error <= half_width; }
};

/// E exp(i phi(v)) with phi(v) = <v, Z>, Z standard Gaussian in R^dim, against exp(-|v|^2/2).
MCReport mc_characteristic(std::span<const double> v, std::size_t n_samples, RandomSeed seed);

/// E phi(v) phi(w) against <v, w>.
MCReport mc_field_covariance(std::span<const double> v, std::span<const double> w, std::size_t n_samples,
                             RandomSeed seed);

struct FockReport {
    MCReport kernel;     // E exp(i phi(w - v)) vs exp(-|v - w|^2 / 2)
    MCReport normalized; // exp((|v|^2 + |w|^2)/2) * kernel estimate vs exp(<v, w>)
};

FockReport mc_fock_kernel(std::span<const double> v, std::span<const double> w, std::size_t n_samples,
                          RandomSeed seed);

namespace reference {

MCReport mc_characteristic_serial(std::span<const double> v, std::size_t n_samples, RandomSeed seed);

} // namespace reference

} // namespace rpkit
