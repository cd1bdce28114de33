#pragma once

#include <cstdint>
#include <vector>

#include "inr/kspace.hpp"

namespace inr {

enum class MaskKind { CartesianLines, Pointwise };

/// Which image axis indexes the phase-encode lines. With `Cols`, a sampled
/// line j covers every row of column j.
enum class LineAxis { Cols, Rows };

/// The undersampling operator and, through `sampled() == false`, its complement.
class SamplingMask {
 public:
  SamplingMask() = default;
  SamplingMask(MaskKind kind, Image2D<std::uint8_t> sampled);

  MaskKind kind() const { return kind_; }
  Index rows() const { return sampled_.rows(); }
  Index cols() const { return sampled_.cols(); }
  bool sampled(Index r, Index c) const { return sampled_(r, c) != 0; }
  bool sampled(Index p) const { return sampled_[p] != 0; }
  Index count() const;
  const Image2D<std::uint8_t>& pattern() const { return sampled_; }

  SamplingMask complement() const;

  // Construction parameters, kept for reporting.
  int acceleration = 1;
  int acs_lines = 0;
  double rate = 1.0;
  std::uint64_t seed = 0;

  friend bool operator==(const SamplingMask& a, const SamplingMask& b) {
    return a.kind_ == b.kind_ && a.sampled_ == b.sampled_;
  }

 private:
  MaskKind kind_ = MaskKind::CartesianLines;
  Image2D<std::uint8_t> sampled_;
};

/// Lines {offset, offset + R, ...} plus a centred block of `acs` lines
/// starting at n/2 - acs/2.
SamplingMask uniform_cartesian_mask(Index rows, Index cols, int acceleration, int acs,
                                    LineAxis axis = LineAxis::Cols, int offset = 0);

inline constexpr double kDefaultGaussianSigmaFraction = 0.15;

/// round(rate * rows * cols) distinct points drawn without replacement with
/// probability proportional to a centred 2D Gaussian.
SamplingMask gaussian_pointwise_mask(Index rows, Index cols, double rate,
                                     double sigma_frac = kDefaultGaussianSigmaFraction,
                                     std::uint64_t seed = 0);

KspaceVolume apply_mask(const KspaceVolume& k, const SamplingMask& m);
KspaceVolume apply_complement(const KspaceVolume& k, const SamplingMask& m);

}  // namespace inr
