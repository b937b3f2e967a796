#include <mlcp/tensor.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mlcp {

std::size_t shape_numel(const Shape &shape) {
    if (shape.empty())
        throw InvalidArgument("tensor shape must have at least one mode");
    std::size_t n = 1;
    for (std::size_t e : shape) {
        if (e == 0)
            throw InvalidArgument("tensor extents must be positive, got " + shape_to_string(shape));
        if (n > std::numeric_limits<std::size_t>::max() / e)
            throw InvalidArgument("tensor element count overflows: " + shape_to_string(shape));
        n *= e;
    }
    return n;
}

std::string shape_to_string(const Shape &shape) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < shape.size(); ++i)
        os << (i ? "," : "") << shape[i];
    os << ')';
    return os.str();
}

DenseTensor::DenseTensor(Shape shape) : shape_(std::move(shape)) {
    data_.assign(shape_numel(shape_), 0.0);
}

DenseTensor::DenseTensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
    if (data_.size() != shape_numel(shape_))
        throw InvalidArgument("data length " + std::to_string(data_.size()) +
                              " does not match shape " + shape_to_string(shape_));
}

DenseTensor DenseTensor::filled(Shape shape, double value) {
    DenseTensor t(std::move(shape));
    std::fill(t.data_.begin(), t.data_.end(), value);
    return t;
}

std::size_t DenseTensor::linear_index(std::span<const std::size_t> index) const {
    if (index.size() != shape_.size())
        throw InvalidArgument("index rank does not match tensor rank");
    std::size_t linear = 0, stride = 1;
    for (std::size_t m = 0; m < shape_.size(); ++m) {
        if (index[m] >= shape_[m])
            throw InvalidArgument("index out of range in mode " + std::to_string(m));
        linear += index[m] * stride;
        stride *= shape_[m];
    }
    return linear;
}

DenseTensor DenseTensor::reshaped(Shape shape) const {
    if (shape_numel(shape) != numel())
        throw InvalidArgument("reshape " + shape_to_string(shape_) + " -> " + shape_to_string(shape) +
                              " changes the element count");
    return DenseTensor(std::move(shape), data_);
}

DenseTensor &DenseTensor::operator+=(const DenseTensor &other) {
    require_same_shape(*this, other, "operator+=");
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] += other.data_[i];
    return *this;
}

DenseTensor &DenseTensor::operator-=(const DenseTensor &other) {
    require_same_shape(*this, other, "operator-=");
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] -= other.data_[i];
    return *this;
}

DenseTensor &DenseTensor::operator*=(double s) {
    for (double &v : data_)
        v *= s;
    return *this;
}

DenseTensor operator+(DenseTensor a, const DenseTensor &b) { return a += b; }
DenseTensor operator-(DenseTensor a, const DenseTensor &b) { return a -= b; }
DenseTensor operator*(DenseTensor a, double s) { return a *= s; }
DenseTensor operator*(double s, DenseTensor a) { return a *= s; }

double frobenius_norm(const DenseTensor &t) {
    double s = 0;
    for (double v : t.data())
        s += v * v;
    return std::sqrt(s);
}

double l1_norm(const DenseTensor &t) {
    double s = 0;
    for (double v : t.data())
        s += std::abs(v);
    return s;
}

double inf_norm(const DenseTensor &t) {
    double m = 0;
    for (double v : t.data())
        m = std::max(m, std::abs(v));
    return m;
}

double max_abs_diff(const DenseTensor &a, const DenseTensor &b) {
    require_same_shape(a, b, "max_abs_diff");
    double m = 0;
    for (std::size_t i = 0; i < a.numel(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

bool all_finite(const DenseTensor &t) {
    return std::all_of(t.data().begin(), t.data().end(), [](double v) { return std::isfinite(v); });
}

void require_same_shape(const DenseTensor &a, const DenseTensor &b, const char *what) {
    if (a.shape() != b.shape())
        throw InvalidArgument(std::string(what) + ": shape mismatch " + shape_to_string(a.shape()) +
                              " vs " + shape_to_string(b.shape()));
}

void require_3way(const DenseTensor &t, const char *what) {
    if (t.ndim() != 3)
        throw InvalidArgument(std::string(what) + ": expected a 3-way tensor, got shape " +
                              shape_to_string(t.shape()));
}

ComplexSliceStack::ComplexSliceStack(std::size_t rows, std::size_t cols, std::size_t slices)
    : rows_(rows), cols_(cols), slices_(slices), data_(rows * cols * slices) {}

} // namespace mlcp
