#ifndef FNORM_RNG_HPP
#define FNORM_RNG_HPP

#include <cstdint>
#include <random>

#include "fnorm/math.hpp"

namespace fnorm {

/// Seeded random stream. Uniform variates are produced directly from the
/// mt19937_64 output so that draws are bit-reproducible across platforms;
/// normals go through the inverse cdf for the same reason. A stream must
/// not be shared between concurrent callers.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : seed_(seed), gen_(seed) {}

    /// Uniform on the open interval (0,1).
    double uniform() {
        return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal() { return normal_quantile(uniform()); }

    std::uint64_t raw() { return gen_(); }

    std::uint64_t seed() const noexcept { return seed_; }

    /// Independent substream for worker/replication `index`, derived from
    /// the original seed (splitmix64 mixing). Does not advance this stream.
    RandomStream split(std::uint64_t index) const {
        std::uint64_t z = seed_ + (index + 1) * 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return RandomStream(z ^ (z >> 31));
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 gen_;
};

} // namespace fnorm

#endif // FNORM_RNG_HPP
