#include "rbepwt/container.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "rbepwt/error.hpp"

namespace rbepwt {

namespace {

constexpr std::uint8_t kFlagSupport = 0x1;
constexpr std::uint8_t kFlagChebyshev = 0x2;
constexpr std::uint8_t kKnownFlags = kFlagSupport | kFlagChebyshev;

class ByteWriter {
public:
    void u8(std::uint8_t v) { bytes_.push_back(v); }
    void u16(std::uint16_t v) { put(v, 2); }
    void u32(std::uint32_t v) { put(v, 4); }
    void f64(double v) { put(std::bit_cast<std::uint64_t>(v), 8); }
    void raw(const char* s, std::size_t n) { bytes_.insert(bytes_.end(), s, s + n); }

    template <typename Sequence>
    void rle(const Sequence& values) {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> runs;
        for (auto v : values) {
            if (!runs.empty() && runs.back().second == v) ++runs.back().first;
            else runs.emplace_back(1, static_cast<std::uint32_t>(v));
        }
        u32(static_cast<std::uint32_t>(runs.size()));
        for (auto [length, value] : runs) {
            u32(length);
            u32(value);
        }
    }

    std::vector<std::uint8_t> take() { return std::move(bytes_); }
    const std::vector<std::uint8_t>& bytes() const { return bytes_; }

private:
    void put(std::uint64_t v, int n) {
        for (int i = 0; i < n; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }

    std::vector<std::uint8_t> bytes_;
};

class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::uint8_t u8() { return static_cast<std::uint8_t>(get(1)); }
    std::uint16_t u16() { return static_cast<std::uint16_t>(get(2)); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
    double f64() { return std::bit_cast<double>(get(8)); }

    std::size_t position() const noexcept { return pos_; }
    std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

    // Guards count-prefixed blocks against absurd lengths before allocating.
    void need(std::uint64_t count, std::size_t item_size) const {
        if (count * item_size > remaining()) fail(ErrorKind::Format, "truncation: stream ends inside a block");
    }

    std::vector<std::uint32_t> rle(std::size_t expected_length, const char* what) {
        const std::uint32_t runs = u32();
        need(runs, 8);
        std::vector<std::uint32_t> out;
        out.reserve(expected_length);
        for (std::uint32_t r = 0; r < runs; ++r) {
            const std::uint32_t length = u32();
            const std::uint32_t value = u32();
            if (length == 0 || length > expected_length - out.size())
                fail(ErrorKind::Format, std::string("corrupt stream: ") + what + " run lengths");
            out.insert(out.end(), length, value);
        }
        if (out.size() != expected_length) fail(ErrorKind::Format, std::string("corrupt stream: ") + what + " is short");
        return out;
    }

private:
    std::uint64_t get(int n) {
        if (remaining() < static_cast<std::size_t>(n)) fail(ErrorKind::Format, "truncation: unexpected end of stream");
        std::uint64_t v = 0;
        for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_ + static_cast<std::size_t>(i)]) << (8 * i);
        pos_ += static_cast<std::size_t>(n);
        return v;
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes) {
    uLong crc = crc32(0L, Z_NULL, 0);
    return static_cast<std::uint32_t>(crc32(crc, bytes.data(), static_cast<uInt>(bytes.size())));
}

}  // namespace

std::vector<std::uint8_t> serialize(const EncodedImage& enc) {
    validate(enc);
    if (enc.width > 0xFFFF || enc.height > 0xFFFF || enc.levels > 0xFF)
        fail(ErrorKind::Precondition, "dimensions or level count exceed the container's field widths");

    ByteWriter out;
    out.raw("RBE1", 4);
    out.u8(kContainerVersion);
    out.u8(static_cast<std::uint8_t>(enc.kind.mode));
    out.u8(enc.bank == WaveletKind::Haar ? 0 : 1);
    std::uint8_t flags = 0;
    if (enc.support) flags |= kFlagSupport;
    if (enc.kind.distance == Distance::Chebyshev) flags |= kFlagChebyshev;
    out.u8(flags);
    out.u16(static_cast<std::uint16_t>(enc.width));
    out.u16(static_cast<std::uint16_t>(enc.height));
    out.u8(static_cast<std::uint8_t>(enc.levels));
    out.u32(enc.labels.region_count());
    out.rle(enc.labels.labels());
    if (enc.support) out.rle(*enc.support);
    for (const RegionGradient& g : enc.gradients) {
        out.f64(g.gx);
        out.f64(g.gy);
    }
    for (const Permutation& p : enc.stored_perms) {
        out.u32(static_cast<std::uint32_t>(p.size()));
        for (std::uint32_t v : p) out.u32(v);
    }
    out.u32(static_cast<std::uint32_t>(enc.approx_lowest.size()));
    for (double v : enc.approx_lowest) out.f64(v);
    for (const auto& d : enc.details) {
        out.u32(static_cast<std::uint32_t>(d.size()));
        for (double v : d) out.f64(v);
    }
    out.u32(crc32_of(out.bytes()));
    return out.take();
}

EncodedImage deserialize(std::span<const std::uint8_t> bytes) {
    if (bytes.empty()) fail(ErrorKind::Format, "truncation: empty stream");
    const std::size_t head = std::min<std::size_t>(bytes.size(), 4);
    if (std::memcmp(bytes.data(), "RBE1", head) != 0) fail(ErrorKind::Format, "bad magic");
    if (head < 4) fail(ErrorKind::Format, "truncation: stream shorter than its magic");
    ByteReader in(bytes.subspan(4));
    const std::uint8_t version = in.u8();
    if (version != kContainerVersion)
        fail(ErrorKind::Format, "version mismatch: stream version " + std::to_string(version));

    EncodedImage enc;
    const std::uint8_t mode = in.u8();
    if (mode > 2) fail(ErrorKind::Format, "corrupt stream: unknown path mode");
    enc.kind.mode = static_cast<PathMode>(mode);
    const std::uint8_t bank = in.u8();
    if (bank > 1) fail(ErrorKind::Format, "corrupt stream: unknown wavelet");
    enc.bank = bank == 0 ? WaveletKind::Haar : WaveletKind::Cdf97;
    const std::uint8_t flags = in.u8();
    if (flags & ~kKnownFlags) fail(ErrorKind::Format, "corrupt stream: unknown flags");
    enc.kind.distance = (flags & kFlagChebyshev) ? Distance::Chebyshev : Distance::Euclidean;
    enc.width = in.u16();
    enc.height = in.u16();
    enc.levels = in.u8();
    if (enc.width == 0 || enc.height == 0) fail(ErrorKind::Format, "corrupt stream: zero image dimension");
    const std::uint32_t region_count = in.u32();

    const std::size_t pixels = enc.width * enc.height;
    std::vector<std::uint32_t> labels = in.rle(pixels, "label map");
    try {
        enc.labels = LabelMap(enc.width, enc.height, std::move(labels));
    } catch (const Error& e) {
        fail(ErrorKind::Format, std::string("corrupt stream: ") + e.what());
    }
    if (enc.labels.region_count() != region_count) fail(ErrorKind::Format, "corrupt stream: region count mismatch");

    if (flags & kFlagSupport) {
        const std::vector<std::uint32_t> mask = in.rle(pixels, "support mask");
        enc.support.emplace();
        enc.support->reserve(pixels);
        for (std::uint32_t v : mask) {
            if (v > 1) fail(ErrorKind::Format, "corrupt stream: support mask values must be 0 or 1");
            enc.support->push_back(static_cast<std::uint8_t>(v));
        }
    }
    if (enc.kind.mode == PathMode::Grad) {
        in.need(region_count, 16);
        enc.gradients.resize(region_count);
        for (RegionGradient& g : enc.gradients) {
            g.gx = in.f64();
            g.gy = in.f64();
        }
    }
    if (enc.kind.mode == PathMode::Epwt) {
        enc.stored_perms.resize(enc.levels);
        for (Permutation& p : enc.stored_perms) {
            const std::uint32_t n = in.u32();
            in.need(n, 4);
            p.resize(n);
            for (std::uint32_t& v : p) v = in.u32();
        }
    }
    auto read_vector = [&](std::vector<double>& v) {
        const std::uint32_t n = in.u32();
        in.need(n, 8);
        v.resize(n);
        for (double& x : v) x = in.f64();
    };
    read_vector(enc.approx_lowest);
    enc.details.resize(enc.levels);
    for (auto& d : enc.details) read_vector(d);

    const std::size_t body = 4 + in.position();
    const std::uint32_t stored_crc = in.u32();
    if (in.remaining() != 0) fail(ErrorKind::Format, "corrupt stream: trailing bytes after checksum");
    if (stored_crc != crc32_of(bytes.first(body))) fail(ErrorKind::Format, "checksum failure");
    validate(enc);
    return enc;
}

void save_encoded(const EncodedImage& enc, const std::filesystem::path& path) {
    const std::vector<std::uint8_t> bytes = serialize(enc);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(ErrorKind::Io, "write failed for " + path.string());
}

EncodedImage load_encoded(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return deserialize(bytes);
}

}  // namespace rbepwt
