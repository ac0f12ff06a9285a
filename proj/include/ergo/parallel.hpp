#pragma once

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ergo {

// Global switch used by the serial reference path and the benchmark.
inline bool& serial_mode() {
    static bool s = false;
    return s;
}

template <class F>
void parallel_for(std::ptrdiff_t n, F&& body) {
    if (serial_mode()) {
        for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
        return;
    }
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
#else
    for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
#endif
}

// Deterministic sum: fixed 4096-element blocks, each summed left to right,
// block partials combined pairwise.  The result does not depend on thread
// count, so parallel and serial runs agree bitwise.
template <class T, class F>
T block_sum(std::ptrdiff_t n, F&& term) {
    constexpr std::ptrdiff_t B = 4096;
    if (n <= 0) return T{};
    std::ptrdiff_t nblocks = (n + B - 1) / B;
    std::vector<T> partial(nblocks, T{});
    parallel_for(nblocks, [&](std::ptrdiff_t b) {
        T s{};
        std::ptrdiff_t hi = std::min(n, (b + 1) * B);
        for (std::ptrdiff_t i = b * B; i < hi; ++i) s += term(i);
        partial[b] = s;
    });
    for (std::ptrdiff_t width = 1; width < nblocks; width *= 2)
        for (std::ptrdiff_t i = 0; i + width < nblocks; i += 2 * width)
            partial[i] += partial[i + width];
    return partial[0];
}

namespace reference {
// Plain left-to-right loop versions, kept as oracles for the blocked kernels.
template <class T, class F>
T plain_sum(std::ptrdiff_t n, F&& term) {
    T s{};
    for (std::ptrdiff_t i = 0; i < n; ++i) s += term(i);
    return s;
}
} // namespace reference

} // namespace ergo
