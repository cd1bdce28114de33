#include "inr/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "inr/error.hpp"
#include "inr/rng.hpp"

namespace inr {

SamplingMask::SamplingMask(MaskKind kind, Image2D<std::uint8_t> sampled)
    : kind_(kind), sampled_(std::move(sampled)) {
  if (sampled_.empty()) throw InvalidInput("sampling mask: empty grid");
}

Index SamplingMask::count() const {
  return std::count_if(sampled_.values().begin(), sampled_.values().end(), [](auto v) { return v != 0; });
}

SamplingMask SamplingMask::complement() const {
  Image2D<std::uint8_t> flipped(rows(), cols());
  for (Index p = 0; p < flipped.size(); ++p) flipped[p] = sampled_[p] ? 0 : 1;
  SamplingMask out = *this;
  out.sampled_ = std::move(flipped);
  return out;
}

SamplingMask uniform_cartesian_mask(Index rows, Index cols, int acceleration, int acs, LineAxis axis,
                                    int offset) {
  if (rows < 1 || cols < 1) throw InvalidParameter("uniform mask: empty grid");
  const Index lines = axis == LineAxis::Cols ? cols : rows;
  if (acceleration < 1 || acceleration > lines) {
    throw InvalidParameter("uniform mask: R must lie in [1, " + std::to_string(lines) + "]");
  }
  if (acs < 0 || acs > lines) throw InvalidParameter("uniform mask: ACS must lie in [0, " + std::to_string(lines) + "]");
  if (offset < 0 || offset >= acceleration) throw InvalidParameter("uniform mask: offset must lie in [0, R)");

  std::vector<bool> line_on(static_cast<std::size_t>(lines), false);
  for (Index l = offset; l < lines; l += acceleration) line_on[static_cast<std::size_t>(l)] = true;
  const Index acs_start = lines / 2 - acs / 2;
  for (Index l = acs_start; l < acs_start + acs; ++l) line_on[static_cast<std::size_t>(l)] = true;

  Image2D<std::uint8_t> pattern(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      pattern(r, c) = line_on[static_cast<std::size_t>(axis == LineAxis::Cols ? c : r)] ? 1 : 0;
    }
  }
  SamplingMask mask(MaskKind::CartesianLines, std::move(pattern));
  mask.acceleration = acceleration;
  mask.acs_lines = acs;
  mask.rate = static_cast<double>(mask.count()) / static_cast<double>(rows * cols);
  return mask;
}

SamplingMask gaussian_pointwise_mask(Index rows, Index cols, double rate, double sigma_frac, std::uint64_t seed) {
  if (rows < 1 || cols < 1) throw InvalidParameter("gaussian mask: empty grid");
  if (!(rate > 0.0) || rate > 1.0) throw InvalidParameter("gaussian mask: rate must lie in (0, 1]");
  if (!(sigma_frac > 0.0)) throw InvalidParameter("gaussian mask: sigma_frac must be positive");

  const Index total = rows * cols;
  const auto target = std::max<Index>(1, static_cast<Index>(std::llround(rate * static_cast<double>(total))));

  // Gumbel-top-k over log-weights: equivalent to weighted sampling without
  // replacement (Efraimidis-Spirakis keys) and immune to weight underflow.
  Xoshiro256 rng(seed);
  const double sr = sigma_frac * static_cast<double>(rows);
  const double sc = sigma_frac * static_cast<double>(cols);
  std::vector<double> key(static_cast<std::size_t>(total));
  for (Index r = 0; r < rows; ++r) {
    const double dr = static_cast<double>(r - rows / 2) / sr;
    for (Index c = 0; c < cols; ++c) {
      const double dc = static_cast<double>(c - cols / 2) / sc;
      const double log_weight = -0.5 * (dr * dr + dc * dc);
      const double gumbel = -std::log(-std::log(rng.uniform_open0()));
      key[static_cast<std::size_t>(r * cols + c)] = log_weight + gumbel;
    }
  }
  std::vector<Index> order(static_cast<std::size_t>(total));
  std::iota(order.begin(), order.end(), Index{0});
  // Index tiebreak keeps the result independent of the sort implementation.
  std::partial_sort(order.begin(), order.begin() + target, order.end(), [&](Index a, Index b) {
    const double ka = key[static_cast<std::size_t>(a)];
    const double kb = key[static_cast<std::size_t>(b)];
    return ka != kb ? ka > kb : a < b;
  });

  Image2D<std::uint8_t> pattern(rows, cols);
  for (Index i = 0; i < target; ++i) pattern[order[static_cast<std::size_t>(i)]] = 1;
  SamplingMask mask(MaskKind::Pointwise, std::move(pattern));
  mask.rate = rate;
  mask.seed = seed;
  return mask;
}

namespace {

KspaceVolume select(const KspaceVolume& k, const SamplingMask& m, bool keep_sampled) {
  if (k.rows() != m.rows() || k.cols() != m.cols()) throw InvalidInput("mask shape does not match k-space");
  KspaceVolume out(k.coils(), k.rows(), k.cols());
  out.scale = k.scale;
  for (Index j = 0; j < k.coils(); ++j) {
    for (Index p = 0; p < m.rows() * m.cols(); ++p) {
      if (m.sampled(p) == keep_sampled) out[j][p] = k[j][p];
    }
  }
  return out;
}

}  // namespace

KspaceVolume apply_mask(const KspaceVolume& k, const SamplingMask& m) { return select(k, m, true); }
KspaceVolume apply_complement(const KspaceVolume& k, const SamplingMask& m) { return select(k, m, false); }

}  // namespace inr
