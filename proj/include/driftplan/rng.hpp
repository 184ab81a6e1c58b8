#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace driftplan {

/// splitmix64 step; used to derive named substreams from a master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic substream seed from (master, name, index). Every stochastic
/// stage derives its own stream this way so any stage can be replayed in
/// isolation and work units can run in parallel without sharing state.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view name,
                                 std::uint64_t index = 0) {
    std::uint64_t h = splitmix64(master);
    for (char c : name) h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<unsigned char>(c)));
    return splitmix64(h ^ splitmix64(index));
}

/// mt19937_64 wrapper with the draw helpers used across the toolkit.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }  // [0,1)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace driftplan
