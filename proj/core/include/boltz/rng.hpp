#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace boltz
{
//---------------------------------------------------------------------------//
/*!
 * Philox4x32-10 block function (Salmon et al., SC'11).
 *
 * Stateless bijection of a 128-bit counter under a 64-bit key; used to give
 * every (seed, stream) pair its own reproducible sequence independent of
 * scheduling.
 */
struct Philox4x32
{
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter ctr, Key key);
};

//! SplitMix64 finalizer, used to fold stream coordinates into one id
std::uint64_t mix64(std::uint64_t x);

//---------------------------------------------------------------------------//
/*!
 * Counter-based random stream.
 *
 * A stream is addressed by (seed, a, b), e.g. (seed, step, particle). Draws
 * consume 32-bit words from successive Philox blocks; two streams with
 * different coordinates never share a counter.
 */
class CounterStream
{
  public:
    using result_type = std::uint64_t;

    CounterStream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

    std::uint32_t next_u32();
    std::uint64_t next_u64();

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }
    result_type operator()() { return next_u64(); }

    //! Uniform in the open interval (0, 1)
    double uniform();
    //! Uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n);
    double normal();
    double exponential();
    std::uint64_t poisson(double mean);

  private:
    Philox4x32::Key key_;
    Philox4x32::Counter ctr_;
    Philox4x32::Counter block_{};
    int used_{4};
    bool has_spare_normal_{false};
    double spare_normal_{0};

    void refill();
};

}  // namespace boltz
