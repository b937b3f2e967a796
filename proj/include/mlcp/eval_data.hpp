#pragma once

#include <mlcp/mask.hpp>
#include <mlcp/tensor.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mlcp {

// --- synthetic data --------------------------------------------------------

/// t-product of I1 x r x K and r x I2 x K standard normal factors, where K is
/// the product of the trailing extents; N-way shapes are folded back at the
/// end. Factor A is drawn first, column-major, then B.
DenseTensor gen_lowrank(const Shape &shape, std::size_t rank, std::uint64_t seed);

/// Exactly round(sr * numel) observed entries, the first entries of a seeded
/// partial Fisher-Yates shuffle.
SamplingMask gen_mask(const Shape &shape, double sr, std::uint64_t seed);

struct NoiseSpec {
    double sp_fraction = 0;    ///< salt-and-pepper fraction in [0, 1)
    double gaussian_sigma = 0; ///< standard deviation, >= 0
    std::optional<std::pair<double, double>> noniid; ///< per-slice salt-and-pepper range (lo, hi)
    std::uint64_t seed = 0;

    void validate() const;
};

/// Gaussian noise on every entry, then each entry is replaced by 0 or 1 (equal
/// odds) with the salt-and-pepper probability of its frontal slice. Slices are
/// indexed by the trailing modes beyond the first two.
DenseTensor add_mixed_noise(const DenseTensor &z, const NoiseSpec &spec);

/// Affine map onto [0, 1]; a constant tensor maps to zeros.
DenseTensor normalize_unit(const DenseTensor &z);

// --- metrics ---------------------------------------------------------------

/// Mean over frontal bands of 10 log10(peak^2 / MSE_b); +inf when some band
/// matches exactly.
double psnr(const DenseTensor &x, const DenseTensor &ref, double peak);
/// Mean over bands of the single-scale SSIM index (11x11 Gaussian window,
/// sigma 1.5, valid region; the window shrinks to min(11, I1, I2)).
double ssim(const DenseTensor &x, const DenseTensor &ref, double peak);
/// 100/ratio * sqrt(mean_b (RMSE_b / mean(ref_b))^2).
double ergas(const DenseTensor &x, const DenseTensor &ref, double ratio = 1.0);

struct MetricRow {
    std::string method;
    std::string setting; ///< sampling rate or noise level
    double psnr = 0;
    double ssim = 0;
    double ergas = 0;
};

MetricRow evaluate(const DenseTensor &x, const DenseTensor &ref, double peak, double ratio, std::string method,
                   std::string setting);
/// Columns: method, sr_or_noise, psnr, ssim, fsim, ergas. FSIM is "n/a".
void write_metrics_csv(std::ostream &os, const std::vector<MetricRow> &rows);

// --- file I/O --------------------------------------------------------------

/// Malformed tensor file; `offset` is the byte position of the problem.
class FormatError : public std::runtime_error {
  public:
    FormatError(const std::string &what, std::uint64_t offset);
    std::uint64_t offset() const noexcept { return offset_; }

  private:
    std::uint64_t offset_;
};

/// "TNS1", version byte 1, ndim byte, ndim u64 extents, f64 payload, all
/// little-endian, payload column-major.
void save_tensor(const std::filesystem::path &path, const DenseTensor &t);
DenseTensor load_tensor(const std::filesystem::path &path);
void write_tensor(std::ostream &os, const DenseTensor &t);
DenseTensor read_tensor(std::istream &is);

} // namespace mlcp
