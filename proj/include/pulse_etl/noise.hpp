#pragma once

#include <cstdint>
#include <random>

namespace pulse_etl {

/// SplitMix64 finalizer; used to derive independent seeds from a base seed.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) noexcept;

/// Standard-normal sample source identified by (seed, stream_id).
/// Streams are owned by one consumer; do not share across threads.
class NoiseStream {
public:
    NoiseStream(std::uint64_t seed, std::uint64_t stream_id);

    double next() { return normal_(engine_); }

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] std::uint64_t stream_id() const noexcept { return stream_id_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace pulse_etl
