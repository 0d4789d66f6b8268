#include "dms/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace dms {

static_assert(std::endian::native == std::endian::little,
              "DMSF writer assumes a little-endian host");

namespace {
constexpr char kMagic[4] = {0x44, 0x4D, 0x53, 0x46};  // "DMSF"
constexpr std::uint32_t kVersion = 1;
}  // namespace

void write_dmsf(const std::string& path, const Field& f) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("write_dmsf: cannot open " + path);
    os.write(kMagic, 4);
    const std::uint32_t ver = kVersion;
    const std::uint64_t n = f.grid.n;
    const double extent = f.grid.extent;
    os.write(reinterpret_cast<const char*>(&ver), sizeof ver);
    os.write(reinterpret_cast<const char*>(&n), sizeof n);
    os.write(reinterpret_cast<const char*>(&extent), sizeof extent);
    for (const auto& z : f.values) {
        const double re = z.real(), im = z.imag();
        os.write(reinterpret_cast<const char*>(&re), sizeof re);
        os.write(reinterpret_cast<const char*>(&im), sizeof im);
    }
    if (!os) throw std::runtime_error("write_dmsf: write failed for " + path);
}

Field read_dmsf(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_dmsf: cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("read_dmsf: bad magic in " + path);
    std::uint32_t ver = 0;
    std::uint64_t n = 0;
    double extent = 0.0;
    is.read(reinterpret_cast<char*>(&ver), sizeof ver);
    is.read(reinterpret_cast<char*>(&n), sizeof n);
    is.read(reinterpret_cast<char*>(&extent), sizeof extent);
    if (!is || ver != kVersion) throw std::runtime_error("read_dmsf: unsupported version");
    Field f = Field::zeros(GridSpec::make(n, extent));
    for (auto& z : f.values) {
        double re = 0.0, im = 0.0;
        is.read(reinterpret_cast<char*>(&re), sizeof re);
        is.read(reinterpret_cast<char*>(&im), sizeof im);
        z = cplx(re, im);
    }
    if (!is) throw std::runtime_error("read_dmsf: truncated file " + path);
    return f;
}

}  // namespace dms
