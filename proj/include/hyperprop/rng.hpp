#pragma once

#include <cstdint>

namespace hyperprop {

// Deterministic 64-bit stream generator built on splitmix64
// (Steele/Lea/Flood "Fast splittable pseudorandom number generators";
// constants per Vigna's public-domain reference implementation).
// All state transitions are pure integer arithmetic, so a given
// (base_seed, stream_id) pair yields a bit-identical sequence on every
// platform. Independent streams are derived by running the seed through
// the same finalizer, which is also how child streams for parallel work
// are split off.
class RngStream {
public:
    static constexpr uint64_t kGamma = 0x9E3779B97F4A7C15ull;

    // splitmix64 output finalizer.
    static constexpr uint64_t finalize(uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Derived seed for substream `id` of a stream seeded with `seed`:
    // the (id+1)-th splitmix64 output of a generator started at `seed`.
    static constexpr uint64_t derive(uint64_t seed, uint64_t id) {
        return finalize(seed + kGamma * (id + 1));
    }

    RngStream(uint64_t base_seed, uint64_t stream_id)
        : base_seed_(base_seed),
          stream_id_(stream_id),
          init_(derive(base_seed, stream_id)),
          state_(init_) {}

    uint64_t base_seed() const { return base_seed_; }
    uint64_t stream_id() const { return stream_id_; }
    // Initial state; doubles as the logged per-stream seed value.
    uint64_t stream_seed() const { return init_; }

    // Independent child stream, seeded the way splitmix64's split() would be:
    // child id gets the parent's (id+1)-th potential output as its seed, so
    // distinct ids give distinct seeds and the output walks diverge through
    // the finalizer.
    RngStream child(uint64_t id) const { return RngStream(init_, id); }

    uint64_t next_u64() {
        state_ += kGamma;
        return finalize(state_);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform double in (0, 1); rejects the single zero value.
    double next_open_unit() {
        for (;;) {
            double u = next_unit();
            if (u != 0.0) return u;
        }
    }

    // Unbiased integer in [0, bound) (Lemire's multiply-shift rejection).
    uint64_t next_below(uint64_t bound) {
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
        auto lo = static_cast<uint64_t>(m);
        if (lo < bound) {
            uint64_t threshold = (0 - bound) % bound;
            while (lo < threshold) {
                m = static_cast<unsigned __int128>(next_u64()) * bound;
                lo = static_cast<uint64_t>(m);
            }
        }
        return static_cast<uint64_t>(m >> 64);
    }

private:
    uint64_t base_seed_;
    uint64_t stream_id_;
    uint64_t init_;
    uint64_t state_;
};

}  // namespace hyperprop
