#include "rpkit/monte_carlo.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "parallel_for.hpp"
#include "rpkit/errors.hpp"

namespace rpkit {

namespace {

auto parallel_loop = [](std::int64_t n, auto&& body) { detail::parallel_for(n, body); };
auto serial_loop = [](std::int64_t n, auto&& body) { detail::serial_for(n, body); };

double dot(std::span<const double> a, std::span<const double> b)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        acc += a[i] * b[i];
    return acc;
}

void require_samples(std::size_t n)
{
    if (n == 0)
        throw DomainError("Monte Carlo estimators need n_samples >= 1");
}

// Sums f(<d_0, Z>, <d_1, Z>, ...) over n samples of Z ~ N(0, I_dim) in fixed blocks;
// block partials are combined in block order.
template <std::size_t K, class Loop, class F>
std::array<double, 2> block_sum(const std::array<std::span<const double>, K>& dirs, std::size_t n, RandomSeed seed,
                                Stream stream, Loop loop, F f)
{
    const std::size_t dim = dirs[0].size();
    const auto blocks = static_cast<std::int64_t>((n + kSampleBlock - 1) / kSampleBlock);
    std::vector<std::array<double, 2>> partial(static_cast<std::size_t>(blocks), {0.0, 0.0});
    loop(blocks, [&](std::int64_t b) {
        auto engine = block_engine(seed, stream, static_cast<std::uint64_t>(b));
        std::normal_distribution<double> normal;
        std::vector<double> z(dim);
        const auto first = static_cast<std::size_t>(b) * kSampleBlock;
        const auto last = std::min(n, first + kSampleBlock);
        std::array<double, 2> acc{0.0, 0.0};
        for (std::size_t s = first; s < last; ++s) {
            for (auto& zi : z)
                zi = normal(engine);
            std::array<double, K> phi;
            for (std::size_t k = 0; k < K; ++k)
                phi[k] = dot(dirs[k], z);
            const auto val = f(phi);
            acc[0] += val[0];
            acc[1] += val[1];
        }
        partial[static_cast<std::size_t>(b)] = acc;
    });
    std::array<double, 2> total{0.0, 0.0};
    for (const auto& p : partial) {
        total[0] += p[0];
        total[1] += p[1];
    }
    return total;
}

template <class Loop>
MCReport characteristic_impl(std::span<const double> v, std::size_t n, RandomSeed seed, Loop loop)
{
    require_samples(n);
    const auto sums = block_sum<1>({v}, n, seed, Stream::Characteristic, loop, [](const std::array<double, 1>& phi) {
        return std::array<double, 2>{std::cos(phi[0]), std::sin(phi[0])};
    });
    MCReport r;
    r.n_samples = n;
    r.estimate = {sums[0] / static_cast<double>(n), sums[1] / static_cast<double>(n)};
    r.target = std::exp(-0.5 * dot(v, v));
    r.abs_error = std::abs(r.estimate - r.target);
    r.half_width = 3.0 / std::sqrt(static_cast<double>(n));
    return r;
}

} // namespace

MCReport mc_characteristic(std::span<const double> v, std::size_t n_samples, RandomSeed seed)
{
    return characteristic_impl(v, n_samples, seed, parallel_loop);
}

MCReport mc_field_covariance(std::span<const double> v, std::span<const double> w, std::size_t n_samples,
                             RandomSeed seed)
{
    require_samples(n_samples);
    if (v.size() != w.size())
        throw DomainError("mc_field_covariance: vectors must have equal dimension");
    const auto sums =
        block_sum<2>({v, w}, n_samples, seed, Stream::FieldCovariance, parallel_loop,
                     [](const std::array<double, 2>& phi) { return std::array<double, 2>{phi[0] * phi[1], 0.0}; });
    MCReport r;
    r.n_samples = n_samples;
    r.estimate = sums[0] / static_cast<double>(n_samples);
    const double vw = dot(v, w);
    r.target = vw;
    r.abs_error = std::abs(r.estimate - r.target);
    // Var(phi(v) phi(w)) = |v|^2 |w|^2 + <v,w>^2 for jointly Gaussian centered pairs.
    r.half_width = 3.0 * std::sqrt(dot(v, v) * dot(w, w) + vw * vw) / std::sqrt(static_cast<double>(n_samples));
    return r;
}

FockReport mc_fock_kernel(std::span<const double> v, std::span<const double> w, std::size_t n_samples,
                          RandomSeed seed)
{
    require_samples(n_samples);
    if (v.size() != w.size())
        throw DomainError("mc_fock_kernel: vectors must have equal dimension");
    std::vector<double> diff(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        diff[i] = w[i] - v[i];
    const auto sums = block_sum<1>({std::span<const double>(diff)}, n_samples, seed, Stream::Fock, parallel_loop,
                                   [](const std::array<double, 1>& phi) {
                                       return std::array<double, 2>{std::cos(phi[0]), std::sin(phi[0])};
                                   });
    const double n = static_cast<double>(n_samples);
    FockReport out;
    out.kernel.n_samples = n_samples;
    out.kernel.estimate = {sums[0] / n, sums[1] / n};
    out.kernel.target = std::exp(-0.5 * dot(diff, diff));
    out.kernel.abs_error = std::abs(out.kernel.estimate - out.kernel.target);
    out.kernel.half_width = 3.0 / std::sqrt(n);

    const double factor = std::exp(0.5 * (dot(v, v) + dot(w, w)));
    out.normalized.n_samples = n_samples;
    out.normalized.estimate = factor * out.kernel.estimate;
    out.normalized.target = std::exp(dot(v, w));
    out.normalized.abs_error = std::abs(out.normalized.estimate - out.normalized.target);
    out.normalized.half_width = factor * out.kernel.half_width;
    return out;
}

namespace reference {

MCReport mc_characteristic_serial(std::span<const double> v, std::size_t n_samples, RandomSeed seed)
{
    return characteristic_impl(v, n_samples, seed, serial_loop);
}

} // namespace reference

} // namespace rpkit
