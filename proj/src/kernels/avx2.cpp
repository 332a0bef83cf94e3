// SPDX-License-Identifier: Apache-2.0

// AVX2/FMA variants. Compiled with -mavx2 -mfma; dispatch.cpp only routes
// here after a cpuid check, so nothing in this TU runs on unsupported CPUs.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "kernels_internal.hpp"

namespace dcc::kernels::detail {
namespace {

// Horizontal sum of a 4-lane double vector.
inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d swap = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swap));
}

void cmatvec_avx2(const std::complex<double>* a, std::size_t rows, std::size_t cols,
                  const std::complex<double>* x, std::complex<double>* y) {
    const double* xd = reinterpret_cast<const double*>(x);
    const std::size_t pairs = cols / 2;
    for (std::size_t i = 0; i < rows; ++i) {
        const double* row = reinterpret_cast<const double*>(a + i * cols);
        // Lanes hold (re0, im0, re1, im1) partial sums for two columns.
        __m256d acc = _mm256_setzero_pd();
        std::size_t j = 0;
        for (; j < pairs; ++j) {
            const __m256d av = _mm256_loadu_pd(row + 4 * j);
            const __m256d xv = _mm256_loadu_pd(xd + 4 * j);
            const __m256d xre = _mm256_movedup_pd(xv);
            const __m256d xim = _mm256_permute_pd(xv, 0xF);
            const __m256d aswap = _mm256_permute_pd(av, 0x5);
            acc = _mm256_add_pd(acc, _mm256_fmaddsub_pd(av, xre, _mm256_mul_pd(aswap, xim)));
        }
        __m128d lo = _mm256_castpd256_pd128(acc);
        __m128d hi = _mm256_extractf128_pd(acc, 1);
        __m128d sum = _mm_add_pd(lo, hi); // (re, im)
        double acc_re = _mm_cvtsd_f64(sum);
        double acc_im = _mm_cvtsd_f64(_mm_unpackhi_pd(sum, sum));
        if (cols & 1) {
            const std::complex<double> aj = a[i * cols + cols - 1];
            const std::complex<double> xj = x[cols - 1];
            acc_re += aj.real() * xj.real() - aj.imag() * xj.imag();
            acc_im += aj.real() * xj.imag() + aj.imag() * xj.real();
        }
        y[i] = {acc_re, acc_im};
    }
}

// Squared L2 distance over 2*dim interleaved doubles.
inline double sqdist_row(const double* yr, const double* row, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(yr + i), _mm256_loadu_pd(row + i));
        const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(yr + i + 4), _mm256_loadu_pd(row + i + 4));
        acc0 = _mm256_fmadd_pd(d0, d0, acc0);
        acc1 = _mm256_fmadd_pd(d1, d1, acc1);
    }
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(yr + i), _mm256_loadu_pd(row + i));
        acc0 = _mm256_fmadd_pd(d, d, acc0);
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) {
        const double d = yr[i] - row[i];
        acc += d * d;
    }
    return acc;
}

void sqdist_table_avx2(const std::complex<double>* y, const std::complex<double>* table,
                       std::size_t count, std::size_t dim, double* out) {
    const double* yr = reinterpret_cast<const double*>(y);
    const double* tr = reinterpret_cast<const double*>(table);
    const std::size_t n = 2 * dim;
    for (std::size_t k = 0; k < count; ++k) {
        out[k] = sqdist_row(yr, tr + k * n, n);
    }
}

double sum_abs2_avx2(const std::complex<double>* v, std::size_t n) {
    const double* p = reinterpret_cast<const double*>(v);
    const std::size_t m = 2 * n;
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= m; i += 4) {
        const __m256d x = _mm256_loadu_pd(p + i);
        acc = _mm256_fmadd_pd(x, x, acc);
    }
    double s = hsum(acc);
    for (; i < m; ++i) {
        s += p[i] * p[i];
    }
    return s;
}

} // namespace

const KernelTable& avx2_table() {
    static const KernelTable t{cmatvec_avx2, sqdist_table_avx2, sum_abs2_avx2};
    return t;
}

bool avx2_supported() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

} // namespace dcc::kernels::detail

#endif // x86_64
