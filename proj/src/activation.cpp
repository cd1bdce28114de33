// Built with -ffast-math (see CMakeLists.txt) so these loops vectorize onto
// glibc's vector math routines. Nothing else lives in this file.
#include "activation.hpp"

#include <cmath>

namespace inr::detail {

void sine_activation(double* z, double* derivative, Index n, double w0) {
  // Two passes: a fused loop gets turned into scalar sincos calls.
  for (Index i = 0; i < n; ++i) derivative[i] = w0 * std::cos(w0 * z[i]);
  for (Index i = 0; i < n; ++i) z[i] = std::sin(w0 * z[i]);
}

}  // namespace inr::detail
