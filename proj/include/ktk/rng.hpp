#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace ktk {

inline std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic seed derivation for independent streams (match, side, decision...).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0,
                                 std::uint64_t c = 0) {
    std::uint64_t s = master;
    splitmix64(s);
    s ^= a;
    splitmix64(s);
    s ^= b;
    splitmix64(s);
    s ^= c;
    return splitmix64(s);
}

// Seedable random stream. Bounded draws avoid std::uniform_int_distribution,
// which is not reproducible across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }

    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    Rng split(std::uint64_t stream) {
        std::uint64_t s = next();
        return Rng(derive_seed(s, stream));
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
            int j = below(i + 1);
            std::swap(v[i], v[j]);
        }
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace ktk
