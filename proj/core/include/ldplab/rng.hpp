#pragma once

#include <array>
#include <cstdint>
#include <optional>

namespace ldplab {

// Philox4x32-10 block function (Salmon et al., counter-based RNG).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Counter-based random stream. The seed is the Philox key; the stream id
/// occupies the high 64 bits of the counter, so distinct stream ids walk
/// disjoint counter ranges. Identical (seed, stream_id) pairs replay the
/// identical sequence on every platform.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed, std::uint64_t stream_id = 0);

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }

    // Independent child stream; the parent's position is irrelevant.
    SeededRng substream(std::uint64_t index) const;

    std::uint32_t next_u32();
    std::uint64_t next_u64();

    // Uniform on the open interval (0, 1).
    double uniform();
    double uniform(double lo, double hi);
    double normal();
    // Gamma(shape, 1).
    double gamma(double shape);

private:
    void refill();

    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int buffered_ = 0;
    std::optional<double> spare_normal_;
};

}  // namespace ldplab
