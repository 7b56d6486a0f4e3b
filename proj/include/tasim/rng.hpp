#ifndef TASIM_RNG_HPP
#define TASIM_RNG_HPP

#include <cstdint>

namespace tasim {

// splitmix64 step; also the documented sub-stream derivation:
// substream(seed, p) seeds partition p with splitmix64 applied to
// (seed XOR golden-ratio-scrambled partition index).
std::uint64_t splitmix64(std::uint64_t& state);

// Self-contained xoshiro256++ stream with explicit variate algorithms so the
// produced sequences are identical on every platform (std::*_distribution is
// implementation-defined).
class RngStream {
public:
    explicit RngStream(std::uint64_t seed);

    static RngStream substream(std::uint64_t master_seed, std::uint64_t partition);

    std::uint64_t next_u64();
    double uniform();                         // (0,1)
    double normal();                          // standard normal, polar method
    double gamma(double shape, double scale); // Marsaglia-Tsang

private:
    std::uint64_t s_[4];
    bool have_cached_normal_ = false;
    double cached_normal_ = 0.0;
};

} // namespace tasim

#endif
