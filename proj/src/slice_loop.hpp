#pragma once

#include <mlcp/tensor.hpp>

#include <cstddef>

namespace mlcp::detail {

// Runs body(i) for i in [0, n). Iterations must be independent and must not
// throw; the parallel path is a static OpenMP schedule so per-index results
// are identical to the serial path.
template <class Body>
void for_each_index(Exec exec, std::size_t n, Body &&body) {
    const auto count = static_cast<std::ptrdiff_t>(n);
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < count; ++i)
            body(static_cast<std::size_t>(i));
    } else {
        for (std::ptrdiff_t i = 0; i < count; ++i)
            body(static_cast<std::size_t>(i));
    }
}

} // namespace mlcp::detail
