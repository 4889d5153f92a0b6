#ifndef ECHOMAP_RNG_HPP
#define ECHOMAP_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace echomap {

// splitmix64 finalizer; decorrelates seeds for independent streams.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed ^ stream;
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Box-Muller normal deviates. std::normal_distribution's stream is
// implementation-defined; this one is identical everywhere.
class Gaussian {
public:
    explicit Gaussian(std::uint64_t seed) : rng_(seed) {}
    double operator()(double stddev = 1.0) {
        if (have_spare_) {
            have_spare_ = false;
            return spare_ * stddev;
        }
        const double u1 = 1.0 - uniform01(rng_); // (0, 1]
        const double u2 = uniform01(rng_);
        const double mag = std::sqrt(-2.0 * std::log(u1));
        spare_ = mag * std::sin(2.0 * std::numbers::pi * u2);
        have_spare_ = true;
        return mag * std::cos(2.0 * std::numbers::pi * u2) * stddev;
    }

private:
    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Fisher-Yates with an explicit modulo draw; std::shuffle's stream is
// implementation-defined.
template <typename T>
void deterministic_shuffle(std::vector<T>& values, std::mt19937_64& rng) {
    for (std::size_t i = values.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(values[i - 1], values[j]);
    }
}

} // namespace echomap

#endif
