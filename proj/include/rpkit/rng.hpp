#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace rpkit {

struct RandomSeed {
    std::uint64_t value = 0;
};

/// Independent streams for different consumers of one seed.
enum class Stream : std::uint64_t {
    Paths = 1,
    Characteristic = 2,
    FieldCovariance = 3,
    Fock = 4,
};

/// Paths per RNG block in sample_paths, samples per block in the Monte Carlo estimators.
/// Fixed so results never depend on the thread count.
inline constexpr std::size_t kPathBlock = 256;
inline constexpr std::size_t kSampleBlock = 4096;

inline constexpr std::string_view kGeneratorName =
    "mt19937_64/seed_seq{seed_lo,seed_hi,stream,block}/std::normal_distribution";

/// Engine for one block of one stream.
inline std::mt19937_64 block_engine(RandomSeed seed, Stream stream, std::uint64_t block)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed.value), static_cast<std::uint32_t>(seed.value >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(block),
                      static_cast<std::uint32_t>(block >> 32)};
    return std::mt19937_64(seq);
}

} // namespace rpkit
