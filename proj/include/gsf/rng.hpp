#pragma once

#include <cstddef>
#include <cstdint>

namespace gsf {

/// Counter-based random stream. The n-th draw is a pure function of
/// (seed, stream id, n), so results never depend on scheduling order.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] std::uint64_t stream_id() const noexcept { return stream_id_; }
    [[nodiscard]] std::uint64_t position() const noexcept { return counter_; }

    std::uint64_t next_u64() noexcept;

    /// Uniform on [0, 1).
    double uniform() noexcept;

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    /// Uniform on {0, ..., n-1}; n must be positive.
    std::size_t uniform_index(std::size_t n) noexcept;

    /// Independent child stream; equal (parent key, id) pairs give equal children.
    [[nodiscard]] RngStream split(std::uint64_t id) const noexcept;

    /// Convenience for the (run, subpopulation, purpose) keying used by runners.
    [[nodiscard]] RngStream split(std::uint64_t a, std::uint64_t b) const noexcept {
        return split(a).split(b);
    }

private:
    RngStream(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t key) noexcept
        : seed_(seed), stream_id_(stream_id), key_(key) {}

    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Stream purposes used when splitting per-subpopulation streams.
enum class RngPurpose : std::uint64_t {
    initialization = 1,
    variation = 2,
    parent_selection = 3,
    resampling = 4,
    archive_routing = 5,
};

}  // namespace gsf
