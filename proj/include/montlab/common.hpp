#ifndef MONTLAB_COMMON_HPP
#define MONTLAB_COMMON_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace montlab {

inline constexpr const char* kVersion = "0.1.0";

// Name recorded in reports; see GeneratorSpec / Monte Carlo seeding.
inline constexpr const char* kRngName = "splitmix64+box-muller";

inline void requireArg(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

inline void requireDomain(bool cond, const std::string& msg) {
    if (!cond) throw std::domain_error(msg);
}

// Counter-based deterministic generator. The stream for a given 64-bit seed
// is fixed across platforms; substreams are derived with deriveSeed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // in [0,1)
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // in (0,1]
    double uniformPos() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

    // Box-Muller; two independent standard normals per two uniforms.
    double gaussian() {
        if (haveSpare_) {
            haveSpare_ = false;
            return spare_;
        }
        const double u1 = uniformPos();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        haveSpare_ = true;
        return r * std::cos(a);
    }

private:
    std::uint64_t state_;
    bool haveSpare_ = false;
    double spare_ = 0.0;
};

// Deterministic substream derivation (batches, per-set seeds, ...).
inline std::uint64_t deriveSeed(std::uint64_t root, std::uint64_t stream) {
    Rng mix(root ^ (0x632be59bd9b4e019ULL * (stream + 1)));
    return mix.next();
}

// Total mass of the Gegenbauer weight w_lambda(t) = (1-t^2)^(lambda-1/2).
inline double gegenbauerWeightMass(double lambda) {
    return std::exp(0.5 * std::log(M_PI) + std::lgamma(lambda + 0.5) - std::lgamma(lambda + 1.0));
}

// Even moment int t^m w_lambda dt, m = 2r (odd moments vanish).
inline double gegenbauerWeightMoment(double lambda, int m) {
    if (m % 2 == 1) return 0.0;
    const double r = m / 2;
    return std::exp(std::lgamma(r + 0.5) + std::lgamma(lambda + 0.5) - std::lgamma(r + lambda + 1.0));
}

}  // namespace montlab

#endif
