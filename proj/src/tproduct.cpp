#include <mlcp/tensor_core.hpp>

#include "slice_loop.hpp"

namespace mlcp {

DenseTensor t_product(const DenseTensor &a, const DenseTensor &b, Exec exec) {
    require_3way(a, "t_product");
    require_3way(b, "t_product");
    if (a.extent(1) != b.extent(0) || a.extent(2) != b.extent(2))
        throw InvalidArgument("t_product: cannot multiply " + shape_to_string(a.shape()) + " by " +
                              shape_to_string(b.shape()));
    const std::size_t n = a.extent(2);
    const ComplexSliceStack fa = dft_mode3_half(a);
    const ComplexSliceStack fb = dft_mode3_half(b);
    ComplexSliceStack fc(a.extent(0), b.extent(1), fa.slices());
    detail::for_each_index(exec, fa.slices(), [&](std::size_t k) { fc.slice(k).noalias() = fa.slice(k) * fb.slice(k); });
    return idft_mode3_half(fc, n);
}

DenseTensor conj_transpose(const DenseTensor &a) {
    require_3way(a, "conj_transpose");
    const std::size_t i1 = a.extent(0), i2 = a.extent(1), n = a.extent(2);
    DenseTensor out({i2, i1, n});
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t src = (n - k) % n;
        for (std::size_t j = 0; j < i1; ++j)
            for (std::size_t i = 0; i < i2; ++i)
                out(i, j, k) = a(j, i, src);
    }
    return out;
}

DenseTensor identity_tensor(std::size_t n, std::size_t tube_length) {
    DenseTensor out({n, n, tube_length});
    for (std::size_t i = 0; i < n; ++i)
        out(i, i, 0) = 1.0;
    return out;
}

} // namespace mlcp
