#pragma once

#include <cstdint>
#include <random>

namespace natopt {

/// One splitmix64 step (increment, then finalizer). Used to turn (master_seed, stream_id) into an engine
/// seed so that substreams can be derived independently of execution order.
std::uint64_t mix64(std::uint64_t x);

/// Engine seed for the pair (master_seed, stream_id):
/// mix64(master_seed ^ mix64(stream_id + 0x9e3779b97f4a7c15)).
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t stream_id);

/// Stream id for run `run_index` of experiment cell `pair_index`.
constexpr std::uint64_t run_stream_id(std::uint64_t pair_index, std::uint64_t run_index)
{
    return (pair_index << 32) | (run_index & 0xffffffffULL);
}

/// Seedable source of every random draw in the library.
///
/// Identical (master_seed, stream_id) pairs replay identical draw sequences.
/// All derived draws are built from raw 64-bit engine output with fixed
/// consumption counts (uniform: 1 word, gaussian: 2 words), so sequences are
/// bit-identical across standard libraries.
class RandomStream {
public:
    RandomStream(std::uint64_t master_seed, std::uint64_t stream_id);

    std::uint64_t master_seed() const { return master_seed_; }
    std::uint64_t stream_id() const { return stream_id_; }
    std::uint64_t engine_seed() const { return engine_seed_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01();

    /// Uniform on [lo, hi). Throws ContractViolation unless lo < hi.
    double uniform(double lo, double hi);

    /// Standard normal draw (Box-Muller, cosine branch).
    double gaussian();

    /// Uniform integer in [0, n). n must be positive.
    std::size_t index(std::size_t n);

private:
    std::uint64_t master_seed_;
    std::uint64_t stream_id_;
    std::uint64_t engine_seed_;
    std::mt19937_64 engine_;
};

} // namespace natopt
