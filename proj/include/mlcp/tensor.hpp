#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace mlcp {

using Shape = std::vector<std::size_t>;
using cplx = std::complex<double>;

/// Thrown on contract violations: bad shapes, out-of-range modes, non-finite
/// input where finite data is required.
class InvalidArgument : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// How a data-parallel kernel runs. `serial` is the reference path that the
/// OpenMP path must match bit for bit.
enum class Exec { serial, parallel };

std::size_t shape_numel(const Shape &shape);
std::string shape_to_string(const Shape &shape);

/// N-way real array, first index fastest (column-major).
class DenseTensor {
  public:
    DenseTensor() = default;
    explicit DenseTensor(Shape shape);
    DenseTensor(Shape shape, std::vector<double> data);

    static DenseTensor zeros(Shape shape) { return DenseTensor(std::move(shape)); }
    static DenseTensor filled(Shape shape, double value);

    const Shape &shape() const noexcept { return shape_; }
    std::size_t ndim() const noexcept { return shape_.size(); }
    std::size_t extent(std::size_t mode) const { return shape_.at(mode); }
    std::size_t numel() const noexcept { return data_.size(); }
    bool empty() const noexcept { return shape_.empty(); }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }
    const std::vector<double> &values() const noexcept { return data_; }

    double &operator[](std::size_t linear) { return data_[linear]; }
    double operator[](std::size_t linear) const { return data_[linear]; }

    // 3-way element access; caller guarantees ndim() == 3.
    double &operator()(std::size_t i, std::size_t j, std::size_t k) {
        return data_[i + shape_[0] * (j + shape_[1] * k)];
    }
    double operator()(std::size_t i, std::size_t j, std::size_t k) const {
        return data_[i + shape_[0] * (j + shape_[1] * k)];
    }

    std::size_t linear_index(std::span<const std::size_t> index) const;
    double at(std::span<const std::size_t> index) const { return data_[linear_index(index)]; }
    double at(std::initializer_list<std::size_t> index) const {
        return at(std::span<const std::size_t>(index.begin(), index.size()));
    }

    /// Column-major reshape; the element count must not change.
    DenseTensor reshaped(Shape shape) const;

    DenseTensor &operator+=(const DenseTensor &other);
    DenseTensor &operator-=(const DenseTensor &other);
    DenseTensor &operator*=(double s);

    bool operator==(const DenseTensor &other) const = default;

  private:
    Shape shape_;
    std::vector<double> data_;
};

DenseTensor operator+(DenseTensor a, const DenseTensor &b);
DenseTensor operator-(DenseTensor a, const DenseTensor &b);
DenseTensor operator*(DenseTensor a, double s);
DenseTensor operator*(double s, DenseTensor a);

double frobenius_norm(const DenseTensor &t);
double l1_norm(const DenseTensor &t);
double inf_norm(const DenseTensor &t);
double max_abs_diff(const DenseTensor &a, const DenseTensor &b);
bool all_finite(const DenseTensor &t);

void require_same_shape(const DenseTensor &a, const DenseTensor &b, const char *what);
void require_3way(const DenseTensor &t, const char *what);

/// Stack of I3 complex I1 x I2 frontal slices; each slice is contiguous so it
/// can be mapped straight into an Eigen matrix.
class ComplexSliceStack {
  public:
    ComplexSliceStack() = default;
    ComplexSliceStack(std::size_t rows, std::size_t cols, std::size_t slices);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t slices() const noexcept { return slices_; }

    cplx *slice_data(std::size_t k) { return data_.data() + k * rows_ * cols_; }
    const cplx *slice_data(std::size_t k) const { return data_.data() + k * rows_ * cols_; }

    Eigen::Map<Eigen::MatrixXcd> slice(std::size_t k) {
        return {slice_data(k), Eigen::Index(rows_), Eigen::Index(cols_)};
    }
    Eigen::Map<const Eigen::MatrixXcd> slice(std::size_t k) const {
        return {slice_data(k), Eigen::Index(rows_), Eigen::Index(cols_)};
    }

    cplx &operator()(std::size_t i, std::size_t j, std::size_t k) {
        return data_[i + rows_ * (j + cols_ * k)];
    }
    cplx operator()(std::size_t i, std::size_t j, std::size_t k) const {
        return data_[i + rows_ * (j + cols_ * k)];
    }

    std::span<cplx> data() noexcept { return data_; }
    std::span<const cplx> data() const noexcept { return data_; }

  private:
    std::size_t rows_ = 0, cols_ = 0, slices_ = 0;
    std::vector<cplx> data_;
};

} // namespace mlcp
