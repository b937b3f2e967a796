#pragma once

#include <mlcp/tensor.hpp>

#include <cstdint>
#include <vector>

namespace mlcp {

/// Observed-entry indicator Omega, stored one byte per entry in the same
/// column-major order as DenseTensor.
struct SamplingMask {
    Shape shape;
    std::vector<std::uint8_t> observed;
    double sampling_rate = 1.0;
    std::uint64_t seed = 0;

    static SamplingMask all(const Shape &shape);
    /// Nonzero entries of `t` are observed.
    static SamplingMask from_tensor(const DenseTensor &t);
    DenseTensor as_tensor() const;

    std::size_t count() const;
    bool operator[](std::size_t i) const { return observed[i] != 0; }
};

} // namespace mlcp
