#include <mlcp/tensor_core.hpp>

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace mlcp {
namespace {

// FFTW planning is not thread-safe, execution through the new-array interface
// is. Plans are made once per (kind, length, batch) with FFTW_UNALIGNED so
// they can be reused on any buffer, and FFTW_ESTIMATE keeps the chosen
// algorithm (and therefore the rounding) fixed from run to run.
enum class Kind { r2c, c2r, c2c_forward, c2c_backward };

class PlanCache {
  public:
    static PlanCache &instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(Kind kind, int n, int batch, double *re, fftw_complex *cx_in, fftw_complex *cx_out) {
        std::lock_guard lock(mutex_);
        const auto key = std::make_tuple(kind, n, batch);
        if (auto it = plans_.find(key); it != plans_.end())
            return it->second;
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED | FFTW_DESTROY_INPUT;
        fftw_plan p = nullptr;
        switch (kind) {
        case Kind::r2c:
            p = fftw_plan_many_dft_r2c(1, &n, batch, re, nullptr, batch, 1, cx_out, nullptr, batch, 1, flags);
            break;
        case Kind::c2r:
            p = fftw_plan_many_dft_c2r(1, &n, batch, cx_in, nullptr, batch, 1, re, nullptr, batch, 1, flags);
            break;
        case Kind::c2c_forward:
        case Kind::c2c_backward:
            p = fftw_plan_many_dft(1, &n, batch, cx_in, nullptr, batch, 1, cx_out, nullptr, batch, 1,
                                   kind == Kind::c2c_forward ? FFTW_FORWARD : FFTW_BACKWARD, flags);
            break;
        }
        if (!p)
            throw std::runtime_error("FFTW failed to create a plan");
        plans_.emplace(key, p);
        return p;
    }

    ~PlanCache() {
        for (auto &[key, p] : plans_)
            fftw_destroy_plan(p);
    }

  private:
    std::mutex mutex_;
    std::map<std::tuple<Kind, int, int>, fftw_plan> plans_;
};

fftw_complex *as_fftw(cplx *p) { return reinterpret_cast<fftw_complex *>(p); }

} // namespace

ComplexSliceStack dft_mode3_half(const DenseTensor &z) {
    require_3way(z, "dft_mode3");
    const std::size_t i1 = z.extent(0), i2 = z.extent(1), n = z.extent(2);
    ComplexSliceStack out(i1, i2, half_spectrum(n));
    std::vector<double> in(z.data().begin(), z.data().end());
    const int batch = static_cast<int>(i1 * i2);
    fftw_plan p = PlanCache::instance().get(Kind::r2c, static_cast<int>(n), batch, in.data(), nullptr,
                                            as_fftw(out.data().data()));
    fftw_execute_dft_r2c(p, in.data(), as_fftw(out.data().data()));
    return out;
}

DenseTensor idft_mode3_half(const ComplexSliceStack &half, std::size_t tube_length) {
    if (half.slices() != half_spectrum(tube_length))
        throw InvalidArgument("idft_mode3_half: slice count does not match tube length");
    const std::size_t i1 = half.rows(), i2 = half.cols();
    ComplexSliceStack work = half;
    DenseTensor out({i1, i2, tube_length});
    const int batch = static_cast<int>(i1 * i2);
    fftw_plan p = PlanCache::instance().get(Kind::c2r, static_cast<int>(tube_length), batch,
                                            out.data().data(), as_fftw(work.data().data()), nullptr);
    fftw_execute_dft_c2r(p, as_fftw(work.data().data()), out.data().data());
    out *= 1.0 / static_cast<double>(tube_length);
    return out;
}

ComplexSliceStack dft_mode3(const DenseTensor &z) {
    const ComplexSliceStack half = dft_mode3_half(z);
    const std::size_t n = z.extent(2), h = half.slices();
    ComplexSliceStack full(half.rows(), half.cols(), n);
    for (std::size_t k = 0; k < n; ++k) {
        if (k < h)
            full.slice(k) = half.slice(k);
        else
            full.slice(k) = half.slice(n - k).conjugate();
    }
    return full;
}

ComplexSliceStack idft_mode3_complex(const ComplexSliceStack &z) {
    ComplexSliceStack work = z;
    ComplexSliceStack out(z.rows(), z.cols(), z.slices());
    const int batch = static_cast<int>(z.rows() * z.cols());
    fftw_plan p = PlanCache::instance().get(Kind::c2c_backward, static_cast<int>(z.slices()), batch,
                                            nullptr, as_fftw(work.data().data()),
                                            as_fftw(out.data().data()));
    fftw_execute_dft(p, as_fftw(work.data().data()), as_fftw(out.data().data()));
    const double scale = 1.0 / static_cast<double>(z.slices());
    for (cplx &v : out.data())
        v *= scale;
    return out;
}

DenseTensor idft_mode3(const ComplexSliceStack &z) {
    const ComplexSliceStack c = idft_mode3_complex(z);
    DenseTensor out({z.rows(), z.cols(), z.slices()});
    for (std::size_t i = 0; i < out.numel(); ++i)
        out[i] = c.data()[i].real();
    return out;
}

} // namespace mlcp
