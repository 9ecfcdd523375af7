#pragma once

#include <complex>

namespace torusmix::fft {

// In-place complex transforms on a d-dimensional N^d array (row-major).
// forward applies e^{-2pi i k.x} and divides by N^d, so spectral coefficients
// satisfy f(x) = sum_k fhat(k) e^{+2pi i k.x}; backward is the unnormalized
// inverse. Plans are cached; creation is serialized (FFTW planning is not
// thread safe), execution is concurrent.
void forward(int dimension, int resolution, std::complex<double>* data);
void backward(int dimension, int resolution, std::complex<double>* data);

// 2D unnormalized backward transform on an M x M block, used by the slab
// evaluator in the sard module.
void backward_2d(int resolution, std::complex<double>* data);
void backward_1d(int resolution, std::complex<double>* data);

}  // namespace torusmix::fft
