#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace qiopa {

// SplitMix64 (Steele, Lea & Flood). Used to derive independent substream
// seeds; satisfies UniformRandomBitGenerator.
class SplitMix64 {
  public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

  private:
    std::uint64_t state_;
};

// Seed of substream `stream` under a master seed: the (stream+1)-th output of
// SplitMix64(master ^ golden-ratio-scrambled stream).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    SplitMix64 sm(master ^ (stream * 0xd1b54a32d192ed03ull));
    sm();
    return sm();
}

// Engine for one unit of work (one analyzer setting, one bootstrap resample).
using Engine = std::mt19937_64;

inline Engine substream(std::uint64_t master, std::uint64_t stream) {
    return Engine(derive_seed(master, stream));
}

}  // namespace qiopa
