#pragma once

#include <cstdint>
#include <span>
#include <utility>

namespace tsr {

/// xorshift64* (Vigna, 2016): state ^= state >> 12; state ^= state << 25;
/// state ^= state >> 27; output = state * 0x2545F4914F6CDD1D.
///
/// The state is initialized from the seed with one splitmix64 step
/// (seed + 0x9E3779B97F4A7C15, then the standard 30/27/31 mix). A zero
/// result is replaced by 0x9E3779B97F4A7C15. Everything that needs
/// randomness (shuffle/split, folds, hyperparameter draws) goes through
/// this generator so a seed fully determines a run.
class XorShift64Star {
public:
    explicit XorShift64Star(std::uint64_t seed) noexcept {
        std::uint64_t z = seed + 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        z ^= z >> 31;
        state_ = z != 0 ? z : 0x9E3779B97F4A7C15ull;
    }

    std::uint64_t next() noexcept {
        state_ ^= state_ >> 12;
        state_ ^= state_ << 25;
        state_ ^= state_ >> 27;
        return state_ * 0x2545F4914F6CDD1Dull;
    }

    /// Unbiased integer in [0, bound) by rejection of the low remainder zone.
    std::uint64_t below(std::uint64_t bound) noexcept {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    /// Real in [0, 1) from the top 53 bits.
    double unit() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform real in [lo, hi).
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * unit(); }

private:
    std::uint64_t state_;
};

/// Fisher-Yates from the back: for i = n-1 .. 1 swap items[i] with items[below(i+1)].
template <typename T>
void shuffle(std::span<T> items, XorShift64Star& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.below(i));
        using std::swap;
        swap(items[i - 1], items[j]);
    }
}

}  // namespace tsr
