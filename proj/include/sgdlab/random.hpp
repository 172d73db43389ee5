#ifndef SGDLAB_RANDOM_HPP
#define SGDLAB_RANDOM_HPP

#include <array>
#include <cstdint>

namespace sgdlab {

// Deterministic random stream: xoshiro256++ seeded through splitmix64.
//
// Substreams for parallel work are produced with the generator's long-jump,
// which advances the state by 2^192 draws; trajectory index i lives in the
// i-th block, so distinct indices can never overlap.
//
// Gaussians use the Marsaglia polar method, chi-square uses the
// Marsaglia-Tsang gamma sampler. Draw sequences are bit-exact for a fixed
// seed within one build of this library.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed);

    // Stream for trajectory `index` under `seed`: base state jumped
    // `index + 1` blocks of 2^192 draws ahead.
    static RandomStream substream(std::uint64_t seed, std::uint64_t index);

    std::uint64_t next_u64();

    // Uniform on (0, 1), 53-bit resolution, never exactly 0.
    double uniform();

    // Standard normal (polar method).
    double gaussian();

    // Gamma(shape, scale), shape > 0.
    double gamma(double shape, double scale);

    // Chi-square with `dof` degrees of freedom, dof > 0.
    double chi_square(double dof);

    std::uint64_t seed() const { return seed_; }

private:
    void long_jump();

    std::array<std::uint64_t, 4> state_{};
    std::uint64_t seed_ = 0;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace sgdlab

#endif  // SGDLAB_RANDOM_HPP
