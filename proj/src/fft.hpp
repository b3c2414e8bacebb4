#pragma once

// Thin FFTW wrapper. Plans are created once per (shape, direction) and
// executed on caller buffers through the new-array interface.

#include <vector>

#include "weylmod/common.hpp"

namespace weylmod::detail {

// Unnormalized DFT in place over a row-major array of the given shape.
// sign = -1: X_k = sum_j x_j e^{-2 pi i jk/n}; sign = +1 the inverse kernel.
void fft_inplace(cplx* data, const std::vector<int>& shape, int sign);

inline void fft_inplace(CVec& data, const std::vector<int>& shape, int sign) {
    fft_inplace(data.data(), shape, sign);
}

}  // namespace weylmod::detail
