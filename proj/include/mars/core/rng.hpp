#pragma once

#include <cstdint>
#include <random>

namespace mars {

/// Seeded random stream. Equal (seed, stream) pairs produce bit-identical sequences
/// on every platform: the engine is fully specified by the standard and the
/// conversion to floating point is done here rather than by a distribution.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        std::seed_seq seq{
            static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
            static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
        m_engine.seed(seq);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(m_engine() >> 11) * 0x1.0p-53; }

    std::uint64_t bits() { return m_engine(); }

private:
    std::mt19937_64 m_engine;
};

} // namespace mars
