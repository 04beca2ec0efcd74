#pragma once

#include <cstddef>
#include <random>
#include <vector>

namespace chromaforge::detail {

/// Knuth's selection sampling: k distinct values from [lo, lo + n), ascending.
template <typename T, typename Rng>
std::vector<T> select_ascending(T lo, std::size_t n, std::size_t k, Rng& rng) {
    std::vector<T> out;
    if (k > n) k = n;
    out.reserve(k);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::size_t needed = k;
    for (std::size_t i = 0; i < n && needed > 0; ++i) {
        const std::size_t remaining = n - i;
        if (static_cast<double>(remaining) * u(rng) < static_cast<double>(needed)) {
            out.push_back(static_cast<T>(lo + static_cast<T>(i)));
            --needed;
        }
    }
    return out;
}

}  // namespace chromaforge::detail
