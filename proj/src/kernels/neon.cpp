// SPDX-License-Identifier: Apache-2.0

// NEON variants for aarch64. Advanced SIMD is mandatory on aarch64, so no
// runtime feature probe is needed.

#if defined(__aarch64__)

#include <arm_neon.h>

#include "kernels_internal.hpp"

namespace dcc::kernels::detail {
namespace {

void cmatvec_neon(const std::complex<double>* a, std::size_t rows, std::size_t cols,
                  const std::complex<double>* x, std::complex<double>* y) {
    const double* xd = reinterpret_cast<const double*>(x);
    for (std::size_t i = 0; i < rows; ++i) {
        const double* row = reinterpret_cast<const double*>(a + i * cols);
        // One 2-lane vector holds a single complex value (re, im).
        float64x2_t acc = vdupq_n_f64(0.0);
        for (std::size_t j = 0; j < cols; ++j) {
            const float64x2_t av = vld1q_f64(row + 2 * j);
            const float64x2_t xv = vld1q_f64(xd + 2 * j);
            const float64x2_t xre = vdupq_laneq_f64(xv, 0);
            const float64x2_t xim = vdupq_laneq_f64(xv, 1);
            const float64x2_t aswap = vextq_f64(av, av, 1);
            // (ar*xr - ai*xi, ai*xr + ar*xi)
            float64x2_t t = vmulq_f64(aswap, xim);
            t = vsetq_lane_f64(-vgetq_lane_f64(t, 0), t, 0);
            acc = vaddq_f64(acc, vfmaq_f64(t, av, xre));
        }
        y[i] = {vgetq_lane_f64(acc, 0), vgetq_lane_f64(acc, 1)};
    }
}

inline double sqdist_row(const double* yr, const double* row, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t d = vsubq_f64(vld1q_f64(yr + i), vld1q_f64(row + i));
        acc = vfmaq_f64(acc, d, d);
    }
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) {
        const double d = yr[i] - row[i];
        s += d * d;
    }
    return s;
}

void sqdist_table_neon(const std::complex<double>* y, const std::complex<double>* table,
                       std::size_t count, std::size_t dim, double* out) {
    const double* yr = reinterpret_cast<const double*>(y);
    const double* tr = reinterpret_cast<const double*>(table);
    const std::size_t n = 2 * dim;
    for (std::size_t k = 0; k < count; ++k) {
        out[k] = sqdist_row(yr, tr + k * n, n);
    }
}

double sum_abs2_neon(const std::complex<double>* v, std::size_t n) {
    const double* p = reinterpret_cast<const double*>(v);
    const std::size_t m = 2 * n;
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= m; i += 2) {
        const float64x2_t x = vld1q_f64(p + i);
        acc = vfmaq_f64(acc, x, x);
    }
    double s = vaddvq_f64(acc);
    for (; i < m; ++i) {
        s += p[i] * p[i];
    }
    return s;
}

} // namespace

const KernelTable& neon_table() {
    static const KernelTable t{cmatvec_neon, sqdist_table_neon, sum_abs2_neon};
    return t;
}

} // namespace dcc::kernels::detail

#endif // aarch64
