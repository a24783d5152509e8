#pragma once

// Deterministic indexed reductions. The parallel kernel sums fixed-size blocks
// concurrently and combines the block partials with a fixed pairwise tree, so
// its result does not depend on the number of threads. The serial kernel is the
// plain left-to-right reference used by tests and benchmarks.

#include <omp.h>

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace cogra {

enum class Exec { Serial, Parallel };

template <std::size_t N>
using Sums = std::array<double, N>;

template <std::size_t N>
inline void accumulate(Sums<N>& acc, const Sums<N>& v) {
    for (std::size_t k = 0; k < N; ++k) acc[k] += v[k];
}

template <std::size_t N>
inline bool all_finite(const Sums<N>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

inline constexpr std::size_t kReductionBlock = 256;

/// Pairwise sum of block partials, in index order.
template <std::size_t N>
Sums<N> pairwise_combine(std::vector<Sums<N>> partials) {
    if (partials.empty()) return Sums<N>{};
    std::size_t n = partials.size();
    while (n > 1) {
        const std::size_t half = (n + 1) / 2;
        for (std::size_t i = 0; i + half < n; ++i) accumulate(partials[i], partials[i + half]);
        n = half;
    }
    return partials.front();
}

/// Reference: sum_{i<n} term(i) accumulated left to right. Returns the index
/// of the first non-finite term in `bad` (or n).
template <std::size_t N, class Term>
Sums<N> reduce_serial(std::size_t n, Term&& term, std::size_t* bad = nullptr) {
    Sums<N> acc{};
    if (bad) *bad = n;
    for (std::size_t i = 0; i < n; ++i) {
        const Sums<N> v = term(i);
        if (bad && *bad == n && !all_finite(v)) *bad = i;
        accumulate(acc, v);
    }
    return acc;
}

template <std::size_t N, class Term>
Sums<N> reduce_parallel(std::size_t n, Term&& term, std::size_t* bad = nullptr) {
    const std::size_t blocks = (n + kReductionBlock - 1) / kReductionBlock;
    std::vector<Sums<N>> partials(blocks, Sums<N>{});
    std::vector<std::size_t> first_bad(blocks, n);
    const auto nb = static_cast<std::ptrdiff_t>(blocks);
#pragma omp parallel for schedule(static) if (blocks > 1 && !omp_in_parallel())
    for (std::ptrdiff_t b = 0; b < nb; ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kReductionBlock;
        const std::size_t hi = lo + kReductionBlock < n ? lo + kReductionBlock : n;
        Sums<N> acc{};
        for (std::size_t i = lo; i < hi; ++i) {
            const Sums<N> v = term(i);
            if (first_bad[b] == n && !all_finite(v)) first_bad[b] = i;
            accumulate(acc, v);
        }
        partials[b] = acc;
    }
    if (bad) {
        *bad = n;
        for (std::size_t b = 0; b < blocks; ++b)
            if (first_bad[b] < *bad) *bad = first_bad[b];
    }
    return pairwise_combine(std::move(partials));
}

template <std::size_t N, class Term>
Sums<N> reduce(Exec exec, std::size_t n, Term&& term, std::size_t* bad = nullptr) {
    if (exec == Exec::Serial) return reduce_serial<N>(n, term, bad);
    return reduce_parallel<N>(n, term, bad);
}

}  // namespace cogra
