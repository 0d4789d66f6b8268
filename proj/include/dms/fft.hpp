#pragma once

#include <cstddef>

#include "dms/grid.hpp"

namespace dms {

// Unnormalized complex DFT pair backed by FFTW. Plans are cached per size
// and created under a lock; execution uses the new-array interface, which
// is thread-safe, so distinct fields can be transformed concurrently.
//
// forward:  F_k = sum_j f_j e^{-2*pi*i*j*k/n}
// backward: f_j = sum_k F_k e^{+2*pi*i*j*k/n}   (caller divides by n)
namespace fft {

void forward(const cplx* in, cplx* out, std::size_t n);
void backward(const cplx* in, cplx* out, std::size_t n);

}  // namespace fft

}  // namespace dms
