#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "inr/dense.hpp"

namespace inr {

/// Normalized pixel coordinates (r / rows, c / cols), row-major order.
struct CoordinateGrid {
  Index rows = 0;
  Index cols = 0;
  std::vector<std::array<double, 2>> coords;

  Index size() const { return static_cast<Index>(coords.size()); }
};

CoordinateGrid make_grid(Index rows, Index cols);

/// Random Fourier features gamma(c) = [cos(2 pi B c); sin(2 pi B c)] with a
/// fixed E x 2 Gaussian matrix B.
class FourierFeatureMap {
 public:
  FourierFeatureMap() = default;
  /// Draws B row-major from N(0, sigma^2) using the portable generator.
  FourierFeatureMap(Index embed_size, double sigma, std::uint64_t seed);
  /// Fixed B (row-major, E x 2), e.g. restored from a checkpoint.
  FourierFeatureMap(std::vector<double> b, double sigma, std::uint64_t seed);

  Index embed_size() const { return static_cast<Index>(b_.size() / 2); }
  Index output_size() const { return 2 * embed_size(); }
  double sigma() const { return sigma_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<double>& matrix() const { return b_; }

  /// Embedding of one coordinate, length 2E.
  std::vector<double> embed(const std::array<double, 2>& c) const;

  /// Network input: 2E rows, one column per grid point, zero-padded to a
  /// multiple of kPixelBlock columns.
  Matrix embed(const CoordinateGrid& grid) const;

  friend bool operator==(const FourierFeatureMap&, const FourierFeatureMap&) = default;

 private:
  std::vector<double> b_;
  double sigma_ = 0.0;
  std::uint64_t seed_ = 0;
};

}  // namespace inr
