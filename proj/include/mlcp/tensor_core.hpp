#pragma once

#include <mlcp/tensor.hpp>

#include <string>
#include <vector>

#include <Eigen/Core>

namespace mlcp {

/// A mode pair (k1, k2) with k1 < k2, stored 0-based. `label()` prints the
/// conventional 1-based form, e.g. "12" for the first two modes.
struct ModePair {
    std::size_t first = 0;
    std::size_t second = 1;

    std::string label() const;
    bool operator==(const ModePair &) const = default;
};

/// All N(N-1)/2 pairs in lexicographic order (12),(13),...,(1N),(23),...
std::vector<ModePair> mode_pairs(std::size_t ndim);

/// Shape of the mode-(k1,k2) unfolding: (I_k1, I_k2, product of the rest).
Shape unfolded_shape(const Shape &shape, ModePair pair);

/// Mode-(k1,k2) unfolding into a 3-way tensor. Remaining modes are ordered
/// lexicographically with the lowest remaining mode varying fastest.
DenseTensor unfold_mode_pair(const DenseTensor &t, ModePair pair);

/// Exact inverse of unfold_mode_pair.
DenseTensor fold_mode_pair(const DenseTensor &t3, ModePair pair, const Shape &original_shape);

// ---------------------------------------------------------------------------
// Fourier domain along the third mode. Forward transform is unnormalized,
// inverse carries the 1/I3 factor.

ComplexSliceStack dft_mode3(const DenseTensor &z);
/// Real part of the inverse transform. Use idft_mode3_complex to inspect the
/// imaginary residue.
DenseTensor idft_mode3(const ComplexSliceStack &z);
ComplexSliceStack idft_mode3_complex(const ComplexSliceStack &z);

/// Number of Fourier slices that carry independent information for a real
/// signal of tube length n: slices n-k and k are complex conjugates.
constexpr std::size_t half_spectrum(std::size_t n) { return n / 2 + 1; }

/// Forward transform returning only slices [0, half_spectrum(I3)).
ComplexSliceStack dft_mode3_half(const DenseTensor &z);
/// Inverse transform from the non-redundant half of a conjugate-symmetric stack.
DenseTensor idft_mode3_half(const ComplexSliceStack &half, std::size_t tube_length);

// ---------------------------------------------------------------------------
// t-product algebra

DenseTensor t_product(const DenseTensor &a, const DenseTensor &b, Exec exec = Exec::parallel);
DenseTensor conj_transpose(const DenseTensor &a);
DenseTensor identity_tensor(std::size_t n, std::size_t tube_length);

struct TubalFactorization {
    DenseTensor U; ///< I1 x I1 x I3, orthogonal
    DenseTensor S; ///< I1 x I2 x I3, f-diagonal
    DenseTensor V; ///< I2 x I2 x I3, orthogonal

    /// U * S * V^H
    DenseTensor reconstruct() const;
};

TubalFactorization t_svd(const DenseTensor &z, Exec exec = Exec::parallel);

/// Singular values of every Fourier-domain frontal slice, as an R x I3 matrix
/// (R = min(I1, I2)), each column non-increasing.
Eigen::MatrixXd fourier_singular_values(const DenseTensor &z, Exec exec = Exec::parallel);

/// Relative cut-off below which a singular value counts as zero.
inline constexpr double kRankTolerance = 1e-8;

std::size_t tubal_rank(const DenseTensor &z);
std::vector<std::size_t> multi_rank(const DenseTensor &z);
std::vector<std::size_t> n_tubal_rank(const DenseTensor &y);
double tnn(const DenseTensor &z);

} // namespace mlcp
