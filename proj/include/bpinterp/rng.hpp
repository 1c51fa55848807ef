#pragma once

#include <cstdint>

namespace bpinterp {

// Counter-based stream: output i is a strong 64-bit mix of (key, i), so a
// stream is fully determined by its key and is splittable at no cost.
// Streams for one synthetic instance are derived by hashing the master
// seed, the trial index and a purpose tag, which keeps every trial
// bit-reproducible no matter how trials are scheduled across threads.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t key) : key_(key) {}

    std::uint64_t next_u64() {
        std::uint64_t z = key_ + (++counter_) * 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in (0, 1]; never returns 0 so log(u) is always finite.
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; the pair's second value is cached.
    double next_normal();

    double next_sign() { return (next_u64() >> 63) ? 1.0 : -1.0; }

private:
    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// One round of 64-bit mixing (the finalizer above) applied to a single word.
std::uint64_t mix64(std::uint64_t z);

enum class StreamPurpose : std::uint64_t { Features = 1, Noise = 2, Generic = 3 };

// Key for the (seed, run_index, purpose) substream.
std::uint64_t derive_stream_key(std::uint64_t seed, std::uint64_t run_index, StreamPurpose purpose);

} // namespace bpinterp
