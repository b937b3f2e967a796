#include <mlcp/eval_data.hpp>

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

namespace mlcp {
namespace {

constexpr std::array<char, 4> kMagic{'T', 'N', 'S', '1'};
constexpr unsigned char kVersion = 1;

void put_u64(std::ostream &os, std::uint64_t v) {
    std::array<char, 8> b;
    for (int i = 0; i < 8; ++i)
        b[i] = char((v >> (8 * i)) & 0xFF);
    os.write(b.data(), 8);
}

class Reader {
  public:
    explicit Reader(std::istream &is) : is_(is) {}

    void bytes(char *dst, std::size_t n, const char *what) {
        is_.read(dst, std::streamsize(n));
        if (std::size_t(is_.gcount()) != n)
            throw FormatError(std::string("truncated ") + what, offset_ + std::uint64_t(is_.gcount()));
        offset_ += n;
    }
    unsigned char byte(const char *what) {
        char c;
        bytes(&c, 1, what);
        return static_cast<unsigned char>(c);
    }
    std::uint64_t u64(const char *what) {
        std::array<unsigned char, 8> b;
        bytes(reinterpret_cast<char *>(b.data()), 8, what);
        std::uint64_t v = 0;
        for (int i = 7; i >= 0; --i)
            v = (v << 8) | b[i];
        return v;
    }
    std::uint64_t offset() const { return offset_; }

  private:
    std::istream &is_;
    std::uint64_t offset_ = 0;
};

} // namespace

FormatError::FormatError(const std::string &what, std::uint64_t offset)
    : std::runtime_error(what + " at byte " + std::to_string(offset)), offset_(offset) {}

void write_tensor(std::ostream &os, const DenseTensor &t) {
    if (t.ndim() == 0 || t.ndim() > 255)
        throw InvalidArgument("tensor file needs 1 to 255 modes");
    os.write(kMagic.data(), 4);
    os.put(char(kVersion));
    os.put(char(t.ndim()));
    for (std::size_t e : t.shape())
        put_u64(os, e);
    for (double v : t.data())
        put_u64(os, std::bit_cast<std::uint64_t>(v));
    if (!os)
        throw std::runtime_error("failed writing tensor data");
}

DenseTensor read_tensor(std::istream &is) {
    Reader r(is);
    std::array<char, 4> magic;
    r.bytes(magic.data(), 4, "magic");
    if (magic != kMagic)
        throw FormatError("bad magic (expected TNS1)", 0);
    if (const unsigned char v = r.byte("version"); v != kVersion)
        throw FormatError("unsupported version " + std::to_string(v), 4);
    const unsigned ndim = r.byte("ndim");
    if (ndim == 0)
        throw FormatError("tensor has no modes", 5);
    Shape shape(ndim);
    std::uint64_t numel = 1;
    for (unsigned k = 0; k < ndim; ++k) {
        const std::uint64_t at = r.offset();
        shape[k] = r.u64("extent");
        if (shape[k] == 0)
            throw FormatError("zero extent for mode " + std::to_string(k + 1), at);
        if (numel > std::numeric_limits<std::uint64_t>::max() / 8 / shape[k])
            throw FormatError("dimensions overflow", at);
        numel *= shape[k];
    }
    const std::uint64_t payload_at = r.offset();
    // Check the payload length before allocating so a corrupt header cannot
    // request an absurd buffer.
    if (is.rdbuf()) {
        const auto here = is.tellg();
        if (here != std::istream::pos_type(-1)) {
            is.seekg(0, std::ios::end);
            const auto end = is.tellg();
            is.seekg(here);
            if (end != std::istream::pos_type(-1) && std::uint64_t(end - here) < numel * 8)
                throw FormatError("truncated payload: expected " + std::to_string(numel * 8) + " bytes",
                                  payload_at + std::uint64_t(end - here));
        }
    }
    std::vector<double> data(numel);
    for (auto &v : data)
        v = std::bit_cast<double>(r.u64("payload"));
    return DenseTensor(std::move(shape), std::move(data));
}

void save_tensor(const std::filesystem::path &path, const DenseTensor &t) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_tensor(os, t);
}

DenseTensor load_tensor(const std::filesystem::path &path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw std::runtime_error("cannot open " + path.string());
    try {
        return read_tensor(is);
    } catch (const FormatError &e) {
        throw FormatError(path.string() + ": " + e.what(), e.offset());
    }
}

} // namespace mlcp
