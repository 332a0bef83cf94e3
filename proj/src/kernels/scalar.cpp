// SPDX-License-Identifier: Apache-2.0

// Reference kernels. These define the semantics the SIMD variants must
// reproduce; keep them free of fused-multiply-add so results stay the
// plain IEEE evaluation order.

#include "kernels_internal.hpp"

namespace dcc::kernels::detail {
namespace {

void cmatvec_scalar(const std::complex<double>* a, std::size_t rows, std::size_t cols,
                    const std::complex<double>* x, std::complex<double>* y) {
    for (std::size_t i = 0; i < rows; ++i) {
        double acc_re = 0.0;
        double acc_im = 0.0;
        const std::complex<double>* row = a + i * cols;
        for (std::size_t j = 0; j < cols; ++j) {
            const double ar = row[j].real();
            const double ai = row[j].imag();
            const double xr = x[j].real();
            const double xi = x[j].imag();
            acc_re += ar * xr - ai * xi;
            acc_im += ar * xi + ai * xr;
        }
        y[i] = {acc_re, acc_im};
    }
}

void sqdist_table_scalar(const std::complex<double>* y, const std::complex<double>* table,
                         std::size_t count, std::size_t dim, double* out) {
    const double* yr = reinterpret_cast<const double*>(y);
    const double* tr = reinterpret_cast<const double*>(table);
    const std::size_t n = 2 * dim;
    for (std::size_t k = 0; k < count; ++k) {
        const double* row = tr + k * n;
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = yr[i] - row[i];
            acc += d * d;
        }
        out[k] = acc;
    }
}

double sum_abs2_scalar(const std::complex<double>* v, std::size_t n) {
    const double* p = reinterpret_cast<const double*>(v);
    double acc = 0.0;
    for (std::size_t i = 0; i < 2 * n; ++i) {
        acc += p[i] * p[i];
    }
    return acc;
}

} // namespace

const KernelTable& scalar_table() {
    static const KernelTable t{cmatvec_scalar, sqdist_table_scalar, sum_abs2_scalar};
    return t;
}

} // namespace dcc::kernels::detail
