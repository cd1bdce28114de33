#include "inr/array_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "inr/error.hpp"

namespace inr {

namespace fs = std::filesystem;

namespace {

fs::path with_ext(const fs::path& prefix, const char* ext) { return fs::path(prefix.string() + ext); }

std::uint32_t to_le(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::big) return __builtin_bswap32(v);
  return v;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

void write_file_atomic(const fs::path& path, const std::string& contents) {
  const fs::path tmp = fs::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInput("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw InvalidInput("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

void write_array(const fs::path& prefix, std::span<const Index> dims, std::span<const cplx> data) {
  if (dims.empty() || dims.size() > 4) throw InvalidInput("portable array: 1 to 4 dimensions supported");
  Index count = 1;
  for (Index d : dims) {
    if (d < 1) throw InvalidInput("portable array: dimensions must be positive");
    count *= d;
  }
  if (count != static_cast<Index>(data.size())) throw InvalidInput("portable array: element count does not match dimensions");

  std::ostringstream hdr;
  hdr << "# Dimensions\n";
  for (std::size_t i = 0; i < 4; ++i) hdr << (i < dims.size() ? dims[i] : 1) << (i + 1 < 4 ? " " : "\n");

  std::string raw(data.size() * 8, '\0');
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto re = to_le(std::bit_cast<std::uint32_t>(static_cast<float>(data[i].real())));
    const auto im = to_le(std::bit_cast<std::uint32_t>(static_cast<float>(data[i].imag())));
    std::memcpy(raw.data() + 8 * i, &re, 4);
    std::memcpy(raw.data() + 8 * i + 4, &im, 4);
  }
  write_file_atomic(with_ext(prefix, ".cfl"), raw);
  write_file_atomic(with_ext(prefix, ".hdr"), hdr.str());
}

PortableArray read_array(const fs::path& prefix) {
  std::istringstream hdr(read_file(with_ext(prefix, ".hdr")));
  PortableArray arr;
  std::string line;
  while (std::getline(hdr, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    long long d;
    while (fields >> d) arr.dims.push_back(static_cast<Index>(d));
    if (!fields.eof()) throw InvalidInput("portable array: malformed header " + with_ext(prefix, ".hdr").string());
    break;
  }
  if (arr.dims.empty()) throw InvalidInput("portable array: header lists no dimensions");
  while (arr.dims.size() > 1 && arr.dims.back() == 1) arr.dims.pop_back();
  if (arr.dims.size() > 4) throw InvalidInput("portable array: more than 4 non-singleton dimensions");
  Index count = 1;
  for (Index d : arr.dims) {
    if (d < 1) throw InvalidInput("portable array: dimensions must be positive");
    count *= d;
  }

  const std::string raw = read_file(with_ext(prefix, ".cfl"));
  if (static_cast<Index>(raw.size()) != 8 * count) {
    throw InvalidInput("portable array: " + with_ext(prefix, ".cfl").string() + " holds " + std::to_string(raw.size()) +
                       " bytes, header implies " + std::to_string(8 * count));
  }
  arr.data.resize(static_cast<std::size_t>(count));
  for (std::size_t i = 0; i < arr.data.size(); ++i) {
    std::uint32_t re;
    std::uint32_t im;
    std::memcpy(&re, raw.data() + 8 * i, 4);
    std::memcpy(&im, raw.data() + 8 * i + 4, 4);
    arr.data[i] = {std::bit_cast<float>(to_le(re)), std::bit_cast<float>(to_le(im))};
  }
  return arr;
}

void write_coils(const fs::path& prefix, const CoilArray& stack) {
  std::vector<cplx> flat;
  flat.reserve(static_cast<std::size_t>(stack.coils() * stack.rows() * stack.cols()));
  for (const auto& img : stack) flat.insert(flat.end(), img.values().begin(), img.values().end());
  const Index dims[] = {stack.cols(), stack.rows(), stack.coils(), 1};
  write_array(prefix, dims, flat);
}

CoilArray read_coils(const fs::path& prefix) {
  const auto arr = read_array(prefix);
  if (arr.dims.size() > 3) throw InvalidInput("coil array: expected (cols, rows, coils)");
  const Index cols = arr.dims[0];
  const Index rows = arr.dims.size() > 1 ? arr.dims[1] : 1;
  const Index coils = arr.dims.size() > 2 ? arr.dims[2] : 1;
  CoilArray stack(coils, rows, cols);
  for (Index j = 0; j < coils; ++j) {
    std::copy_n(arr.data.begin() + j * rows * cols, rows * cols, stack[j].data());
  }
  return stack;
}

void write_image(const fs::path& prefix, const ComplexImage& img) {
  const Index dims[] = {img.cols(), img.rows(), 1, 1};
  write_array(prefix, dims, img.values());
}

ComplexImage read_image(const fs::path& prefix) {
  const auto stack = read_coils(prefix);
  if (stack.coils() != 1) throw InvalidInput("expected a single image in " + prefix.string());
  return stack[0];
}

void write_real(const fs::path& prefix, const RealImage& img) {
  ComplexImage c(img.rows(), img.cols());
  for (Index p = 0; p < img.size(); ++p) c[p] = img[p];
  write_image(prefix, c);
}

RealImage read_real(const fs::path& prefix) {
  const auto c = read_image(prefix);
  RealImage out(c.rows(), c.cols());
  for (Index p = 0; p < c.size(); ++p) out[p] = c[p].real();
  return out;
}

void write_mask(const fs::path& prefix, const SamplingMask& mask) {
  RealImage img(mask.rows(), mask.cols());
  for (Index p = 0; p < img.size(); ++p) img[p] = mask.sampled(p) ? 1.0 : 0.0;
  write_real(prefix, img);
}

SamplingMask read_mask(const fs::path& prefix) {
  const auto img = read_real(prefix);
  Image2D<std::uint8_t> pattern(img.rows(), img.cols());
  for (Index p = 0; p < img.size(); ++p) pattern[p] = img[p] != 0.0 ? 1 : 0;
  bool column_constant = true;
  for (Index r = 1; r < img.rows() && column_constant; ++r) {
    for (Index c = 0; c < img.cols(); ++c) {
      if (pattern(r, c) != pattern(0, c)) {
        column_constant = false;
        break;
      }
    }
  }
  SamplingMask mask(column_constant ? MaskKind::CartesianLines : MaskKind::Pointwise, std::move(pattern));
  mask.rate = static_cast<double>(mask.count()) / static_cast<double>(img.size());
  return mask;
}

void write_pgm(const fs::path& path, const RealImage& img, double peak) {
  if (!(peak > 0.0)) peak = 1.0;
  std::ostringstream out;
  out << "P5\n" << img.cols() << " " << img.rows() << "\n255\n";
  std::string pixels(static_cast<std::size_t>(img.size()), '\0');
  for (Index p = 0; p < img.size(); ++p) {
    const double v = std::clamp(img[p] / peak, 0.0, 1.0);
    pixels[static_cast<std::size_t>(p)] = static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0)));
  }
  out << pixels;
  write_file_atomic(path, out.str());
}

}  // namespace inr
