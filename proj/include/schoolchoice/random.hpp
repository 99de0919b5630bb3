#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace schoolchoice {

/// splitmix64 (Steele, Lea, Flood). Small state, splittable by reseeding
/// from a mixed stream id.
class SplitMix64 {
public:
    static constexpr const char* kName = "splitmix64";
    static constexpr int kVersion = 1;

    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Independent child stream.
    SplitMix64 split(std::uint64_t stream) const {
        SplitMix64 mix(state_ ^ (stream * 0xd1b54a32d192ed03ULL));
        mix.next();
        return SplitMix64(mix.next());
    }

    // Uniform in [0, n), rejection sampling so there is no modulo bias.
    std::uint64_t below(std::uint64_t n) {
        if (n <= 1) return 0;
        std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t v;
        do v = next();
        while (v >= limit);
        return v % n;
    }

    // Uniform in [lo, hi].
    std::int64_t range(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::uint64_t state_;
};

}  // namespace schoolchoice
