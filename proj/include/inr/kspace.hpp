#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace inr {

using Index = std::ptrdiff_t;
using cplx = std::complex<double>;

/// Dense row-major 2D array. Element (r, c) lives at r * cols + c.
template <typename T>
class Image2D {
 public:
  Image2D() = default;
  Image2D(Index rows, Index cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols), fill) {}

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Index size() const { return rows_ * cols_; }
  bool empty() const { return data_.empty(); }

  T& operator()(Index r, Index c) { return data_[static_cast<std::size_t>(r * cols_ + c)]; }
  const T& operator()(Index r, Index c) const { return data_[static_cast<std::size_t>(r * cols_ + c)]; }
  T& operator[](Index p) { return data_[static_cast<std::size_t>(p)]; }
  const T& operator[](Index p) const { return data_[static_cast<std::size_t>(p)]; }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }
  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }

  bool same_shape(const Image2D& other) const { return rows_ == other.rows_ && cols_ == other.cols_; }

  friend bool operator==(const Image2D&, const Image2D&) = default;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<T> data_;
};

using ComplexImage = Image2D<cplx>;
using RealImage = Image2D<double>;

/// N complex images sharing one H x W grid.
class CoilArray {
 public:
  CoilArray() = default;
  CoilArray(Index coils, Index rows, Index cols) : images_(static_cast<std::size_t>(coils), ComplexImage(rows, cols)) {}
  explicit CoilArray(std::vector<ComplexImage> images);

  Index coils() const { return static_cast<Index>(images_.size()); }
  Index rows() const { return images_.empty() ? 0 : images_.front().rows(); }
  Index cols() const { return images_.empty() ? 0 : images_.front().cols(); }

  ComplexImage& operator[](Index j) { return images_[static_cast<std::size_t>(j)]; }
  const ComplexImage& operator[](Index j) const { return images_[static_cast<std::size_t>(j)]; }

  auto begin() { return images_.begin(); }
  auto end() { return images_.end(); }
  auto begin() const { return images_.begin(); }
  auto end() const { return images_.end(); }

  bool same_shape(const CoilArray& other) const {
    return coils() == other.coils() && rows() == other.rows() && cols() == other.cols();
  }

  friend bool operator==(const CoilArray&, const CoilArray&) = default;

 private:
  std::vector<ComplexImage> images_;
};

/// Multi-coil k-space. `scale` is the factor the data was divided by at
/// normalization; multiply by it to return to acquisition units.
class KspaceVolume : public CoilArray {
 public:
  using CoilArray::CoilArray;
  explicit KspaceVolume(CoilArray data, double scale = 1.0) : CoilArray(std::move(data)), scale(scale) {}

  double scale = 1.0;
};

class CoilSensitivitySet : public CoilArray {
 public:
  using CoilArray::CoilArray;
  explicit CoilSensitivitySet(CoilArray maps) : CoilArray(std::move(maps)) {}
};

/// Guard below which the reference-sensitivity division yields zero.
inline constexpr double kSensitivityDivisionFloor = 1e-8;

bool all_finite(const ComplexImage& img);
bool all_finite(const CoilArray& stack);

/// Centered orthonormal 2D DFT; DC sits at (rows/2, cols/2).
ComplexImage fft2_centered(const ComplexImage& img);
/// Inverse (and adjoint) of fft2_centered.
ComplexImage ifft2_centered(const ComplexImage& k);

CoilArray fft2_centered(const CoilArray& stack);
CoilArray ifft2_centered(const CoilArray& stack);

/// Pixel-wise root sum of squared magnitudes across coils.
RealImage sos_combine(const CoilArray& coil_images);

/// Coil images of a fully sampled volume divided by their SOS combination.
CoilSensitivitySet reference_sensitivities(const KspaceVolume& full_kspace);

/// Rescales so the zero-filled SOS image peaks at 1. The returned volume's
/// `scale` is the input's scale times the divisor.
KspaceVolume normalize_kspace(const KspaceVolume& k);

}  // namespace inr
