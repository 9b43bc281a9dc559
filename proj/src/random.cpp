#include "natopt/random.hpp"

#include "natopt/core.hpp"

#include <cmath>
#include <numbers>

namespace natopt {

std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t stream_id)
{
    return mix64(master_seed ^ mix64(stream_id + 0x9e3779b97f4a7c15ULL));
}

RandomStream::RandomStream(std::uint64_t master_seed, std::uint64_t stream_id)
    : master_seed_(master_seed),
      stream_id_(stream_id),
      engine_seed_(derive_seed(master_seed, stream_id)),
      engine_(engine_seed_)
{
}

double RandomStream::uniform01()
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi)
{
    if (!(lo < hi))
        throw ContractViolation("uniform: requires lo < hi");
    double x = lo + (hi - lo) * uniform01();
    // lo + (hi-lo)*u can round up to hi for u close to 1
    return x < hi ? x : std::nextafter(hi, lo);
}

double RandomStream::gaussian()
{
    double u1 = 1.0 - uniform01();  // (0, 1]
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t RandomStream::index(std::size_t n)
{
    if (n == 0)
        throw ContractViolation("index: n must be positive");
    // rejection keeps the draw unbiased
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % n);
}

} // namespace natopt
