#pragma once
#include <cstddef>
#include <vector>

#ifdef MAIRY_HAVE_OPENMP
#include <omp.h>
#endif

namespace mairy {

enum class ExecutionPolicy { serial, parallel };

// Evaluates fn(0..n-1) into an indexed vector of partial results and combines
// them in index order. The combination order is fixed, so serial and parallel
// runs produce bit-identical sums; only the partial evaluations may run
// concurrently.
template <typename T, typename Fn>
T indexed_reduce(std::size_t n, ExecutionPolicy pol, Fn&& fn) {
    std::vector<T> parts(n);
#ifdef MAIRY_HAVE_OPENMP
    if (pol == ExecutionPolicy::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < static_cast<long long>(n); ++i)
            parts[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < n; ++i) parts[i] = fn(i);
    }
#else
    (void)pol;
    for (std::size_t i = 0; i < n; ++i) parts[i] = fn(i);
#endif
    T total{};
    for (std::size_t i = 0; i < n; ++i) total += parts[i];
    return total;
}

inline int max_threads() {
#ifdef MAIRY_HAVE_OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace mairy
