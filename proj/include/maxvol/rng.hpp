#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace maxvol {

/// splitmix64 step; used to derive independent stream seeds from a base
/// seed and salt values so results do not depend on evaluation order.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                                 std::uint64_t b = 0) {
    return splitmix64(splitmix64(base ^ (0x6a09e667f3bcc908ULL + a)) ^ b);
}

inline std::mt19937_64 make_engine(std::uint64_t seed) {
    return std::mt19937_64(splitmix64(seed));
}

/// Uniform direction on the unit sphere of R^n.
inline std::vector<double> random_unit_vector(int n, std::mt19937_64& eng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> u(n);
    while (true) {
        double s = 0.0;
        for (auto& c : u) {
            c = gauss(eng);
            s += c * c;
        }
        if (s > 1e-24) {
            double inv = 1.0 / std::sqrt(s);
            for (auto& c : u) c *= inv;
            return u;
        }
    }
}

} // namespace maxvol
