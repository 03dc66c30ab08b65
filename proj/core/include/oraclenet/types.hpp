#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace oraclenet {

/// A point in the configuration space. Grid units for the 2D world, radians for arm joints.
using Config = Eigen::VectorXd;

/// Ordered waypoint sequence.
using Path = std::vector<Config>;

/// Caller violated a documented precondition (bad dimension, bad flag, infeasible query).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed file: bad magic, version, shape, checksum or truncation.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The problem instance cannot be served (empty free space, exhausted sampling).
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SamplingExhausted : public DomainError {
public:
    using DomainError::DomainError;
};

using Rng = std::mt19937_64;

/// splitmix64 finalizer; used to derive independent per-task seeds.
[[nodiscard]] constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Uniform double in [0, 1) from the top 53 bits; identical across standard libraries.
[[nodiscard]] inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n) by rejection; n > 0.
[[nodiscard]] inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t r;
    do {
        r = rng();
    } while (r >= limit);
    return r % n;
}

/// Standard normal via Box-Muller on uniform01, so draws are library-independent.
[[nodiscard]] double standard_normal(Rng& rng);

[[nodiscard]] double path_length(const Path& path);

}  // namespace oraclenet
