#include "inr/kspace.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "inr/error.hpp"

namespace inr {

CoilArray::CoilArray(std::vector<ComplexImage> images) : images_(std::move(images)) {
  for (const auto& img : images_) {
    if (!img.same_shape(images_.front())) throw InvalidInput("coil images differ in shape");
  }
}

bool all_finite(const ComplexImage& img) {
  return std::all_of(img.values().begin(), img.values().end(),
                     [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

bool all_finite(const CoilArray& stack) {
  return std::all_of(stack.begin(), stack.end(), [](const ComplexImage& img) { return all_finite(img); });
}

namespace {

// FFTW planning is not thread-safe; execution with new-array execute is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(Index rows, Index cols, int sign) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_tuple(rows, cols, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    const auto n = static_cast<std::size_t>(rows * cols);
    fftw_complex* in = fftw_alloc_complex(n);
    fftw_complex* out = fftw_alloc_complex(n);
    fftw_plan plan = fftw_plan_dft_2d(static_cast<int>(rows), static_cast<int>(cols), in, out, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<Index, Index, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

// out(r, c) = in((r + dr) mod rows, (c + dc) mod cols)
ComplexImage circular_shift(const ComplexImage& in, Index dr, Index dc) {
  ComplexImage out(in.rows(), in.cols());
  for (Index r = 0; r < in.rows(); ++r) {
    const Index sr = (r + dr) % in.rows();
    for (Index c = 0; c < in.cols(); ++c) out(r, c) = in(sr, (c + dc) % in.cols());
  }
  return out;
}

ComplexImage centered_transform(const ComplexImage& img, int sign) {
  if (img.rows() < 1 || img.cols() < 1) throw InvalidInput("fft: empty image");
  if (!all_finite(img)) throw InvalidInput("fft: non-finite input");
  const Index rows = img.rows();
  const Index cols = img.cols();
  // ifftshift moves the centre sample (rows/2, cols/2) to the origin.
  ComplexImage shifted = circular_shift(img, rows / 2, cols / 2);
  ComplexImage spectrum(rows, cols);
  fftw_execute_dft(plan_cache().get(rows, cols, sign), reinterpret_cast<fftw_complex*>(shifted.data()),
                   reinterpret_cast<fftw_complex*>(spectrum.data()));
  // fftshift: origin back to the centre.
  ComplexImage out = circular_shift(spectrum, (rows + 1) / 2, (cols + 1) / 2);
  const double norm = 1.0 / std::sqrt(static_cast<double>(rows * cols));
  for (auto& z : out.values()) z *= norm;
  return out;
}

}  // namespace

ComplexImage fft2_centered(const ComplexImage& img) { return centered_transform(img, FFTW_FORWARD); }
ComplexImage ifft2_centered(const ComplexImage& k) { return centered_transform(k, FFTW_BACKWARD); }

CoilArray fft2_centered(const CoilArray& stack) {
  CoilArray out(stack.coils(), stack.rows(), stack.cols());
  for (Index j = 0; j < stack.coils(); ++j) out[j] = fft2_centered(stack[j]);
  return out;
}

CoilArray ifft2_centered(const CoilArray& stack) {
  CoilArray out(stack.coils(), stack.rows(), stack.cols());
  for (Index j = 0; j < stack.coils(); ++j) out[j] = ifft2_centered(stack[j]);
  return out;
}

RealImage sos_combine(const CoilArray& coil_images) {
  if (coil_images.coils() < 1) throw InvalidInput("sos_combine: no coils");
  RealImage out(coil_images.rows(), coil_images.cols());
  for (Index p = 0; p < out.size(); ++p) {
    double acc = 0.0;
    for (const auto& img : coil_images) acc += std::norm(img[p]);
    out[p] = std::sqrt(acc);
  }
  return out;
}

CoilSensitivitySet reference_sensitivities(const KspaceVolume& full_kspace) {
  if (!all_finite(full_kspace)) throw InvalidInput("reference_sensitivities: non-finite k-space");
  const CoilArray images = ifft2_centered(full_kspace);
  const RealImage sos = sos_combine(images);
  CoilSensitivitySet maps(images.coils(), images.rows(), images.cols());
  for (Index j = 0; j < images.coils(); ++j) {
    for (Index p = 0; p < sos.size(); ++p) {
      maps[j][p] = sos[p] < kSensitivityDivisionFloor ? cplx{} : images[j][p] / sos[p];
    }
  }
  return maps;
}

KspaceVolume normalize_kspace(const KspaceVolume& k) {
  if (k.coils() < 1) throw InvalidInput("normalize_kspace: no coils");
  if (!all_finite(k)) throw InvalidInput("normalize_kspace: non-finite k-space");
  const RealImage sos = sos_combine(ifft2_centered(k));
  const double peak = *std::max_element(sos.values().begin(), sos.values().end());
  if (!(peak > 0.0)) throw InvalidInput("normalize_kspace: all-zero k-space");
  KspaceVolume out(static_cast<const CoilArray&>(k), k.scale * peak);
  for (auto& img : out) {
    for (auto& z : img.values()) z /= peak;
  }
  return out;
}

}  // namespace inr
