#include "tomolab/field_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "tomolab/spectral.hpp"

namespace tomolab {

static_assert(std::endian::native == std::endian::little, "field files assume a little-endian host");

namespace {

constexpr char kMagic[5] = {'T', 'O', 'M', 'F', '1'};

template <typename T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) throw DomainError("field file truncated");
  return v;
}

}  // namespace

void write_field(std::ostream& os, const Field& f) {
  os.write(kMagic, sizeof kMagic);
  put<std::uint8_t>(os, static_cast<std::uint8_t>(f.rank()));
  for (const auto& a : f.axes()) {
    put<std::uint8_t>(os, static_cast<std::uint8_t>(static_cast<std::uint8_t>(a.label) | (a.mode << 4)));
    put<double>(os, a.start);
    put<double>(os, a.step);
    put<std::uint64_t>(os, a.count);
    put<std::uint8_t>(os, a.periodic ? 1 : 0);
  }
  for (Eigen::Index n = 0; n < f.size(); ++n) {
    put<double>(os, f[n].real());
    put<double>(os, f[n].imag());
  }
  if (!os) throw DomainError("failed to write field");
}

Field read_field(std::istream& is) {
  char magic[5];
  if (!is.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0)
    throw DomainError("not a TOMF1 field file");
  const auto rank = get<std::uint8_t>(is);
  if (rank > 6) throw DomainError("field file: unsupported rank");
  std::vector<Axis> axes;
  for (unsigned k = 0; k < rank; ++k) {
    Axis a;
    const auto tag = get<std::uint8_t>(is);
    if ((tag & 0x0F) > static_cast<std::uint8_t>(AxisLabel::x_prime)) throw DomainError("field file: bad axis label");
    a.label = static_cast<AxisLabel>(tag & 0x0F);
    a.mode = static_cast<std::uint8_t>(tag >> 4);
    a.start = get<double>(is);
    a.step = get<double>(is);
    a.count = get<std::uint64_t>(is);
    a.periodic = get<std::uint8_t>(is) != 0;
    axes.push_back(a);
  }
  Field f(axes);
  for (Eigen::Index n = 0; n < f.size(); ++n) {
    const double re = get<double>(is);
    const double im = get<double>(is);
    f[n] = cplx(re, im);
  }
  return f;
}

void save_field(const std::filesystem::path& path, const Field& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DomainError("cannot open '" + path.string() + "' for writing");
  write_field(os, f);
}

Field load_field(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DomainError("cannot open '" + path.string() + "'");
  return read_field(is);
}

void write_csv(std::ostream& os, const Field& f) {
  for (const auto& a : f.axes()) {
    os << to_string(a.label);
    if (a.mode) os << static_cast<int>(a.mode);
    os << ',';
  }
  os << "re,im\n" << std::setprecision(17);
  const auto& v = f.values();
  for_each_node(f.axes(), [&](Eigen::Index n, std::span<const double> c) {
    for (double x : c) os << x << ',';
    os << v[n].real() << ',' << v[n].imag() << '\n';
  });
}

void save_csv(const std::filesystem::path& path, const Field& f) {
  std::ofstream os(path);
  if (!os) throw DomainError("cannot open '" + path.string() + "' for writing");
  write_csv(os, f);
}

}  // namespace tomolab
