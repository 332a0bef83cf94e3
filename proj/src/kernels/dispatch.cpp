// SPDX-License-Identifier: Apache-2.0

#include "dcc/kernels.hpp"

#include <atomic>

#include "dcc/errors.hpp"
#include "kernels_internal.hpp"

namespace dcc::kernels {
namespace {

using detail::KernelTable;

const KernelTable* table_for(Backend b) {
    switch (b) {
    case Backend::scalar:
        return &detail::scalar_table();
#if defined(__x86_64__) || defined(_M_X64)
    case Backend::avx2:
        return detail::avx2_supported() ? &detail::avx2_table() : nullptr;
#endif
#if defined(__aarch64__)
    case Backend::neon:
        return &detail::neon_table();
#endif
    default:
        return nullptr;
    }
}

struct Active {
    std::atomic<const KernelTable*> table;
    std::atomic<Backend> backend;
    Active() {
        Backend b = detected_backend();
        backend.store(b);
        table.store(table_for(b));
    }
};

Active& active() {
    static Active a;
    return a;
}

} // namespace

const char* backend_name(Backend b) {
    switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
    }
    return "unknown";
}

Backend detected_backend() {
#if defined(__x86_64__) || defined(_M_X64)
    if (detail::avx2_supported()) {
        return Backend::avx2;
    }
#endif
#if defined(__aarch64__)
    return Backend::neon;
#endif
    return Backend::scalar;
}

Backend active_backend() {
    return active().backend.load();
}

void set_backend(Backend b) {
    const KernelTable* t = table_for(b);
    if (t == nullptr) {
        throw InvalidArgument(std::string("kernel backend not supported on this CPU: ") +
                              backend_name(b));
    }
    active().backend.store(b);
    active().table.store(t);
}

void cmatvec(const std::complex<double>* a, std::size_t rows, std::size_t cols,
             const std::complex<double>* x, std::complex<double>* y) {
    active().table.load()->cmatvec(a, rows, cols, x, y);
}

void sqdist_table(const std::complex<double>* y, const std::complex<double>* table,
                  std::size_t count, std::size_t dim, double* out) {
    active().table.load()->sqdist_table(y, table, count, dim, out);
}

double sum_abs2(const std::complex<double>* v, std::size_t n) {
    return active().table.load()->sum_abs2(v, n);
}

std::size_t argmin(const double* v, std::size_t n) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (v[i] < v[best]) {
            best = i;
        }
    }
    return best;
}

} // namespace dcc::kernels
