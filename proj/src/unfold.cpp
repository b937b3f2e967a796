#include <mlcp/tensor_core.hpp>

namespace mlcp {

std::string ModePair::label() const {
    return std::to_string(first + 1) + std::to_string(second + 1);
}

std::vector<ModePair> mode_pairs(std::size_t ndim) {
    std::vector<ModePair> pairs;
    for (std::size_t a = 0; a < ndim; ++a)
        for (std::size_t b = a + 1; b < ndim; ++b)
            pairs.push_back({a, b});
    return pairs;
}

namespace {

void check_pair(const Shape &shape, ModePair pair) {
    if (pair.first >= pair.second || pair.second >= shape.size())
        throw InvalidArgument("mode pair (" + std::to_string(pair.first + 1) + "," +
                              std::to_string(pair.second + 1) + ") invalid for a " +
                              std::to_string(shape.size()) + "-way tensor");
}

// Stride of every original mode inside the unfolded 3-way layout.
std::vector<std::size_t> unfolded_strides(const Shape &shape, ModePair pair) {
    std::vector<std::size_t> stride(shape.size());
    const std::size_t plane = shape[pair.first] * shape[pair.second];
    stride[pair.first] = 1;
    stride[pair.second] = shape[pair.first];
    std::size_t j = 1;
    for (std::size_t s = 0; s < shape.size(); ++s) {
        if (s == pair.first || s == pair.second)
            continue;
        stride[s] = plane * j;
        j *= shape[s];
    }
    return stride;
}

// Walks the original tensor in column-major order and calls f(linear, unfolded).
template <class F>
void visit(const Shape &shape, ModePair pair, F &&f) {
    const auto stride = unfolded_strides(shape, pair);
    const std::size_t n = shape_numel(shape);
    std::vector<std::size_t> idx(shape.size(), 0);
    std::size_t target = 0;
    for (std::size_t linear = 0; linear < n; ++linear) {
        f(linear, target);
        for (std::size_t m = 0; m < shape.size(); ++m) {
            if (++idx[m] < shape[m]) {
                target += stride[m];
                break;
            }
            target -= (shape[m] - 1) * stride[m];
            idx[m] = 0;
        }
    }
}

} // namespace

Shape unfolded_shape(const Shape &shape, ModePair pair) {
    check_pair(shape, pair);
    std::size_t rest = 1;
    for (std::size_t s = 0; s < shape.size(); ++s)
        if (s != pair.first && s != pair.second)
            rest *= shape[s];
    return {shape[pair.first], shape[pair.second], rest};
}

DenseTensor unfold_mode_pair(const DenseTensor &t, ModePair pair) {
    DenseTensor out(unfolded_shape(t.shape(), pair));
    visit(t.shape(), pair, [&](std::size_t src, std::size_t dst) { out[dst] = t[src]; });
    return out;
}

DenseTensor fold_mode_pair(const DenseTensor &t3, ModePair pair, const Shape &original_shape) {
    const Shape expected = unfolded_shape(original_shape, pair);
    if (t3.shape() != expected)
        throw InvalidArgument("fold_mode_pair: got " + shape_to_string(t3.shape()) + ", expected " +
                              shape_to_string(expected) + " for original shape " +
                              shape_to_string(original_shape));
    DenseTensor out(original_shape);
    visit(original_shape, pair, [&](std::size_t dst, std::size_t src) { out[dst] = t3[src]; });
    return out;
}

} // namespace mlcp
