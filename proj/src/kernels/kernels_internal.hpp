// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>

// Per-backend entry points. Only dispatch.cpp should include this.

namespace dcc::kernels::detail {

struct KernelTable {
    void (*cmatvec)(const std::complex<double>*, std::size_t, std::size_t,
                    const std::complex<double>*, std::complex<double>*);
    void (*sqdist_table)(const std::complex<double>*, const std::complex<double>*,
                         std::size_t, std::size_t, double*);
    double (*sum_abs2)(const std::complex<double>*, std::size_t);
};

const KernelTable& scalar_table();

#if defined(__x86_64__) || defined(_M_X64)
const KernelTable& avx2_table();
bool avx2_supported();
#endif

#if defined(__aarch64__)
const KernelTable& neon_table();
#endif

} // namespace dcc::kernels::detail
