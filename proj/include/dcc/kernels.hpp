// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <string>

// Data-parallel inner loops of the Monte-Carlo engine and the detectors.
// Every kernel exists as a scalar reference implementation plus SIMD
// variants (AVX2 on x86-64, NEON on aarch64) selected at runtime. The
// variants are equivalence-tested against the scalar path; callers never
// pick an instruction set directly.
//
// Complex vectors use std::complex<double> storage, which is guaranteed
// to be an interleaved (re, im) pair, so complex L2 arithmetic maps onto
// real arithmetic of twice the length.

namespace dcc::kernels {

enum class Backend {
    scalar,
    avx2,
    neon,
};

const char* backend_name(Backend b);

// Best backend supported by the running CPU.
Backend detected_backend();

// Currently active backend (defaults to detected_backend()).
Backend active_backend();

// Force a backend, e.g. for equivalence tests. Throws dcc::InvalidArgument
// if the CPU does not support it.
void set_backend(Backend b);

// y[0..rows) = A * x, with A row-major rows x cols.
void cmatvec(const std::complex<double>* a, std::size_t rows, std::size_t cols,
             const std::complex<double>* x, std::complex<double>* y);

// out[k] = ||y - table[k*dim .. (k+1)*dim)||^2 for k in [0, count).
void sqdist_table(const std::complex<double>* y, const std::complex<double>* table,
                  std::size_t count, std::size_t dim, double* out);

// sum of |v[i]|^2.
double sum_abs2(const std::complex<double>* v, std::size_t n);

// Index of the first minimum (ties resolve to the smallest index).
std::size_t argmin(const double* v, std::size_t n);

} // namespace dcc::kernels
