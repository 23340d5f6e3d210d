#pragma once

#include <array>
#include <cstdint>

namespace bounce {

/// Philox4x32-10 counter-based block cipher (Salmon et al., SC'11).
/// Maps a 128-bit counter and a 64-bit key to 128 pseudo-random bits.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter encrypt(Counter counter, Key key);
};

/// Identifies one independent random stream inside a run. Streams are keyed
/// by the run's master seed, so two runs with the same seed and the same
/// substream id see the same numbers regardless of evaluation order.
struct SubstreamId {
    std::uint32_t security = 0;
    std::uint16_t variable = 0;
    std::uint16_t channel = 0;

    constexpr std::uint64_t packed() const {
        return (static_cast<std::uint64_t>(security) << 32) |
               (static_cast<std::uint64_t>(variable) << 16) | channel;
    }

    friend constexpr bool operator==(const SubstreamId&, const SubstreamId&) = default;
};

/// Sequential reader over a Philox substream.
///
/// The counter layout is (draw index low, draw index high, substream low,
/// substream high), so the n-th block of any substream can be computed
/// directly without generating the n-1 preceding ones.
class NoiseStream {
public:
    NoiseStream(std::uint64_t master_seed, SubstreamId id);

    std::uint64_t master_seed() const { return seed_; }
    SubstreamId substream() const { return id_; }

    std::uint64_t next_u64();

    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform();

    /// Uniform on [lo, hi]; returns lo exactly when lo == hi.
    double uniform(double lo, double hi);

    /// Standard normal via the Box-Muller transform. Draws are produced in
    /// pairs; the second of each pair is cached.
    double normal();

private:
    void refill();

    std::uint64_t seed_;
    SubstreamId id_;
    std::uint64_t block_index_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int buffered_ = 0;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace bounce
