// Deterministic random number utilities.
//
// All generators in this project draw through Rng so that results depend only
// on the seed, not on the standard library's distribution implementations.

#ifndef CA3D_RANDOM_HPP
#define CA3D_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace ca3d {

/// Derives an independent stream seed from a base seed (splitmix64 step).
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform on [0, 1).
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    /// Exact Poisson sample via the exponential-spacings method. O(mean) time,
    /// which is fine for the desk-scale intensities used here.
    int poisson(double mean) {
        if (mean <= 0.0) return 0;
        double t = 0.0;
        int k = -1;
        while (t <= mean) {
            double u = uniform01();
            while (u <= 0.0) u = uniform01();
            t += -std::log(u);
            ++k;
        }
        return k;
    }

private:
    std::mt19937_64 gen_;
};

} // namespace ca3d

#endif // CA3D_RANDOM_HPP
