#pragma once

#include <cstddef>
#include <optional>
#include <exception>
#include <vector>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace varkit {

/// Execution policy for data-parallel kernels. Serial is the reference
/// path; parallel must produce bit-identical results, which every kernel
/// achieves by mapping independent work items by index and reducing
/// serially in index order.
enum class Exec { serial, parallel };

/// Applies fn(i) for i in [0, n) and collects results by index.
/// fn must be a pure function of i (plus captured read-only state).
/// If several items throw, the lowest-index exception is rethrown, so
/// failures are reported identically under both policies.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t n, Exec exec, Fn&& fn) {
    std::vector<std::optional<T>> slots(n);
    if (exec == Exec::parallel) {
        std::vector<std::exception_ptr> errors(n);
#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic)
#endif
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
            const std::size_t k = static_cast<std::size_t>(i);
            try {
                slots[k].emplace(fn(k));
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
        for (const auto& e : errors)
            if (e) std::rethrow_exception(e);
    } else {
        for (std::size_t i = 0; i < n; ++i) slots[i].emplace(fn(i));
    }
    std::vector<T> out;
    out.reserve(n);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

inline int max_threads() {
#if defined(_OPENMP)
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace varkit
