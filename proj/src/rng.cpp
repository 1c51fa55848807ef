#include "bpinterp/rng.hpp"

#include <cmath>
#include <numbers>

namespace bpinterp {

double CounterRng::next_normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
}

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t derive_stream_key(std::uint64_t seed, std::uint64_t run_index, StreamPurpose purpose) {
    std::uint64_t k = mix64(seed);
    k = mix64(k ^ (run_index * 0xD6E8FEB86659FD93ull));
    k = mix64(k ^ (static_cast<std::uint64_t>(purpose) * 0xA3B195354A39B70Dull));
    return k;
}

} // namespace bpinterp
