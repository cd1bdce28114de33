#include "inr/embedding.hpp"

#include <cmath>
#include <numbers>

#include "inr/error.hpp"
#include "inr/rng.hpp"

namespace inr {

CoordinateGrid make_grid(Index rows, Index cols) {
  if (rows < 1 || cols < 1) throw InvalidParameter("make_grid: empty grid");
  CoordinateGrid grid{rows, cols, {}};
  grid.coords.reserve(static_cast<std::size_t>(rows * cols));
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      grid.coords.push_back({static_cast<double>(r) / static_cast<double>(rows),
                             static_cast<double>(c) / static_cast<double>(cols)});
    }
  }
  return grid;
}

FourierFeatureMap::FourierFeatureMap(Index embed_size, double sigma, std::uint64_t seed)
    : sigma_(sigma), seed_(seed) {
  if (embed_size < 1) throw InvalidParameter("embedding size must be positive");
  if (!(sigma > 0.0)) throw InvalidParameter("embedding sigma must be positive");
  Xoshiro256 rng(seed);
  b_.resize(static_cast<std::size_t>(2 * embed_size));
  for (auto& v : b_) v = sigma * rng.normal();
}

FourierFeatureMap::FourierFeatureMap(std::vector<double> b, double sigma, std::uint64_t seed)
    : b_(std::move(b)), sigma_(sigma), seed_(seed) {
  if (b_.empty() || b_.size() % 2 != 0) throw InvalidInput("embedding matrix must be E x 2");
}

std::vector<double> FourierFeatureMap::embed(const std::array<double, 2>& c) const {
  const Index e = embed_size();
  std::vector<double> out(static_cast<std::size_t>(2 * e));
  for (Index i = 0; i < e; ++i) {
    const double phase = 2.0 * std::numbers::pi * (b_[2 * i] * c[0] + b_[2 * i + 1] * c[1]);
    out[static_cast<std::size_t>(i)] = std::cos(phase);
    out[static_cast<std::size_t>(e + i)] = std::sin(phase);
  }
  return out;
}

Matrix FourierFeatureMap::embed(const CoordinateGrid& grid) const {
  const Index e = embed_size();
  Matrix out(2 * e, padded_pixels(grid.size()));
  for (Index p = 0; p < grid.size(); ++p) {
    const auto features = embed(grid.coords[static_cast<std::size_t>(p)]);
    for (Index i = 0; i < 2 * e; ++i) out(i, p) = features[static_cast<std::size_t>(i)];
  }
  return out;
}

}  // namespace inr
