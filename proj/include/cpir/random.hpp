// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace cpir {

/// Independent random streams carved out of one user seed.
enum class Stream : std::uint64_t {
    Messages = 1,
    Interleaver = 2,
    QueryShuffle = 3,
    AuditTrial = 4,
};

/**
 * Derives the seed of stream (kind, index) from a root seed with splitmix64
 * finalization. The rule is fixed so that every plan and message set is
 * reproducible from its seed.
 */
std::uint64_t derive_seed(std::uint64_t root, Stream kind, std::uint64_t index) noexcept;

/**
 * mt19937_64 with a portable bounded draw. std::uniform_int_distribution is
 * implementation-defined, so it is not used where output must be stable.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, bound), bound > 0.
    std::uint64_t below(std::uint64_t bound);

    /// Uniformly random permutation of 0..n-1 (Fisher-Yates).
    std::vector<std::uint32_t> permutation(std::uint32_t n);

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

} // namespace cpir
