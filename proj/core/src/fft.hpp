#pragma once

#include <complex>
#include <cstddef>

namespace anyon::detail {

// In-place 2D DFT over axes (axis, axis + 1) of a complex tensor whose axes
// all have extent `extent`; `rank` is the total number of axes. Forward is
// unnormalized (sign -1); backward (sign +1) is unnormalized as well, callers
// divide by the transform size. Plans are cached and safe to look up from
// several threads.
void dft_axes(std::complex<double>* data, int extent, int rank, int axis, int sign);

inline void dft2(std::complex<double>* data, int n, int sign) { dft_axes(data, n, 2, 0, sign); }

}  // namespace anyon::detail
