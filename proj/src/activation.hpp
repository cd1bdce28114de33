#pragma once

#include "inr/kspace.hpp"

namespace inr::detail {

/// z <- sin(w0 z), derivative <- w0 cos(w0 z), element-wise over n values.
void sine_activation(double* z, double* derivative, Index n, double w0);

}  // namespace inr::detail
