#pragma once

#include <cstdint>
#include <random>

namespace ohr {

/// Reproducible random source: std::mt19937_64 for the integer stream, with
/// the continuous draws built here rather than by <random> distributions,
/// whose algorithms are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Seed for an independent stream: splitmix64 of (seed, index).
    static std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

    /// Uniform on (0, 1) from the top 53 bits.
    double uniform();
    /// Standard normal, Marsaglia polar method.
    double normal();
    /// Gamma(shape, 1), Marsaglia-Tsang with the shape < 1 boost.
    double gamma(double shape);
    double chi_square(double dof) { return 2.0 * gamma(dof / 2.0); }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace ohr
