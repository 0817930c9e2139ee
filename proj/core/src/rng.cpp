#include "boltz/rng.hpp"

#include <cmath>
#include <numbers>

namespace boltz
{
namespace
{
constexpr std::uint32_t kMulA = 0xD2511F53;
constexpr std::uint32_t kMulB = 0xCD9E8D57;
constexpr std::uint32_t kWeylA = 0x9E3779B9;
constexpr std::uint32_t kWeylB = 0xBB67AE85;

// Chunk size for Poisson inversion; larger means are split into sums
constexpr double kPoissonChunk = 30.0;

}  // namespace

Philox4x32::Counter Philox4x32::generate(Counter ctr, Key key)
{
    for (int round = 0; round < 10; ++round)
    {
        std::uint64_t const p0 = std::uint64_t{kMulA} * ctr[0];
        std::uint64_t const p1 = std::uint64_t{kMulB} * ctr[2];
        auto const hi0 = static_cast<std::uint32_t>(p0 >> 32);
        auto const lo0 = static_cast<std::uint32_t>(p0);
        auto const hi1 = static_cast<std::uint32_t>(p1 >> 32);
        auto const lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeylA;
        key[1] += kWeylB;
    }
    return ctr;
}

std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

CounterStream::CounterStream(std::uint64_t seed, std::uint64_t a, std::uint64_t b)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}
{
    std::uint64_t const id = mix64(mix64(a) ^ (b + 0x632BE59BD9B4E019ull));
    ctr_ = {0, 0, static_cast<std::uint32_t>(id), static_cast<std::uint32_t>(id >> 32)};
}

void CounterStream::refill()
{
    block_ = Philox4x32::generate(ctr_, key_);
    if (++ctr_[0] == 0)
        ++ctr_[1];
    used_ = 0;
}

std::uint32_t CounterStream::next_u32()
{
    if (used_ == 4)
        refill();
    return block_[used_++];
}

std::uint64_t CounterStream::next_u64()
{
    std::uint64_t const hi = next_u32();
    return (hi << 32) | next_u32();
}

double CounterStream::uniform()
{
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t CounterStream::below(std::uint64_t n)
{
    // Lemire's nearly-divisionless method on 64-bit words
    std::uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n)
    {
        std::uint64_t const threshold = -n % n;
        while (low < threshold)
        {
            x = next_u64();
            m = static_cast<__uint128_t>(x) * n;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

double CounterStream::normal()
{
    if (has_spare_normal_)
    {
        has_spare_normal_ = false;
        return spare_normal_;
    }
    double const r = std::sqrt(-2 * std::log(uniform()));
    double const angle = 2 * std::numbers::pi * uniform();
    spare_normal_ = r * std::sin(angle);
    has_spare_normal_ = true;
    return r * std::cos(angle);
}

double CounterStream::exponential() { return -std::log(uniform()); }

std::uint64_t CounterStream::poisson(double mean)
{
    std::uint64_t total = 0;
    while (mean > 0)
    {
        double const chunk = mean > kPoissonChunk ? kPoissonChunk : mean;
        mean -= chunk;
        // Inversion by sequential search
        double p = std::exp(-chunk);
        double cdf = p;
        double const u = uniform();
        std::uint64_t n = 0;
        while (u > cdf && n < 1000)
        {
            ++n;
            p *= chunk / static_cast<double>(n);
            cdf += p;
        }
        total += n;
    }
    return total;
}

}  // namespace boltz
