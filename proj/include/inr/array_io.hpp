#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "inr/kspace.hpp"
#include "inr/sampling.hpp"

namespace inr {

/// Header/raw pair `<prefix>.hdr` + `<prefix>.cfl`: the header lists the
/// dimensions (fastest first) on one line; the raw file holds little-endian
/// float32 (real, imag) pairs in column-major order over those dimensions.
/// Our 2D/3D arrays are written as (cols, rows, coils, 1), which is the
/// row-major (coil, row, col) order used in memory.
struct PortableArray {
  std::vector<Index> dims;
  std::vector<cplx> data;
};

void write_array(const std::filesystem::path& prefix, std::span<const Index> dims, std::span<const cplx> data);
PortableArray read_array(const std::filesystem::path& prefix);

void write_coils(const std::filesystem::path& prefix, const CoilArray& stack);
CoilArray read_coils(const std::filesystem::path& prefix);

void write_image(const std::filesystem::path& prefix, const ComplexImage& img);
ComplexImage read_image(const std::filesystem::path& prefix);

/// Real images are stored with zero imaginary parts.
void write_real(const std::filesystem::path& prefix, const RealImage& img);
RealImage read_real(const std::filesystem::path& prefix);

/// 0/1 values; a pattern that is constant down every column reads back as
/// a Cartesian line mask.
void write_mask(const std::filesystem::path& prefix, const SamplingMask& mask);
SamplingMask read_mask(const std::filesystem::path& prefix);

/// 8-bit binary PGM of img / peak clipped to [0, 1].
void write_pgm(const std::filesystem::path& path, const RealImage& img, double peak = 1.0);

/// Writes through a temporary sibling and renames, so readers never see a
/// partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace inr
