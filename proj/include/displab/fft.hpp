#pragma once

#include <complex>
#include <vector>

namespace displab {

using cplx = std::complex<double>;

/// In-place c2c FFT on a row-major d-dimensional array (d = 1 or 2, n points
/// per axis). Plans are cached per (d, n, direction) and created with
/// FFTW_ESTIMATE so plan selection is reproducible across runs. Execution is
/// thread-safe; plan creation is serialized internally.
void fft_forward(int d, int n, std::vector<cplx>& data);
void fft_backward(int d, int n, std::vector<cplx>& data);

}  // namespace displab
