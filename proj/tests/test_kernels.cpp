// SPDX-License-Identifier: Apache-2.0

// Equivalence tests: every SIMD backend must reproduce the scalar reference
// kernels on random inputs.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <random>
#include <vector>

#include "dcc/errors.hpp"
#include "dcc/kernels.hpp"

using dcc::kernels::Backend;

namespace {

std::vector<std::complex<double>> random_cvec(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<std::complex<double>> v(n);
    for (auto& x : v) {
        x = {g(rng), g(rng)};
    }
    return v;
}

struct BackendGuard {
    Backend saved;
    BackendGuard() : saved(dcc::kernels::active_backend()) {}
    ~BackendGuard() { dcc::kernels::set_backend(saved); }
};

} // namespace

TEST_CASE("detected backend is selectable and scalar always works") {
    BackendGuard guard;
    dcc::kernels::set_backend(Backend::scalar);
    CHECK(dcc::kernels::active_backend() == Backend::scalar);
    dcc::kernels::set_backend(dcc::kernels::detected_backend());
    CHECK(dcc::kernels::active_backend() == dcc::kernels::detected_backend());
}

TEST_CASE("unsupported backend is rejected") {
#if defined(__x86_64__)
    CHECK_THROWS_AS(dcc::kernels::set_backend(Backend::neon), dcc::InvalidArgument);
#else
    CHECK_THROWS_AS(dcc::kernels::set_backend(Backend::avx2), dcc::InvalidArgument);
#endif
}

TEST_CASE("SIMD matvec matches scalar reference") {
    BackendGuard guard;
    const Backend simd = dcc::kernels::detected_backend();
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t rows = 1 + rng() % 16;
        const std::size_t cols = 1 + rng() % 16;
        const auto a = random_cvec(rows * cols, rng);
        const auto x = random_cvec(cols, rng);
        std::vector<std::complex<double>> y_ref(rows), y_simd(rows);

        dcc::kernels::set_backend(Backend::scalar);
        dcc::kernels::cmatvec(a.data(), rows, cols, x.data(), y_ref.data());
        dcc::kernels::set_backend(simd);
        dcc::kernels::cmatvec(a.data(), rows, cols, x.data(), y_simd.data());

        for (std::size_t i = 0; i < rows; ++i) {
            CHECK(std::abs(y_ref[i] - y_simd[i]) <=
                  1e-12 * (1.0 + std::abs(y_ref[i])));
        }
    }
}

TEST_CASE("SIMD distance table matches scalar reference") {
    BackendGuard guard;
    const Backend simd = dcc::kernels::detected_backend();
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t count = 1 + rng() % 32;
        const std::size_t dim = 1 + rng() % 24;
        const auto y = random_cvec(dim, rng);
        const auto table = random_cvec(count * dim, rng);
        std::vector<double> d_ref(count), d_simd(count);

        dcc::kernels::set_backend(Backend::scalar);
        dcc::kernels::sqdist_table(y.data(), table.data(), count, dim, d_ref.data());
        dcc::kernels::set_backend(simd);
        dcc::kernels::sqdist_table(y.data(), table.data(), count, dim, d_simd.data());

        for (std::size_t k = 0; k < count; ++k) {
            CHECK(d_simd[k] == doctest::Approx(d_ref[k]).epsilon(1e-12));
        }
        // Random continuous data: the decision must agree too.
        CHECK(dcc::kernels::argmin(d_ref.data(), count) ==
              dcc::kernels::argmin(d_simd.data(), count));
    }
}

TEST_CASE("SIMD energy matches scalar reference") {
    BackendGuard guard;
    const Backend simd = dcc::kernels::detected_backend();
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + rng() % 64;
        const auto v = random_cvec(n, rng);
        dcc::kernels::set_backend(Backend::scalar);
        const double ref = dcc::kernels::sum_abs2(v.data(), n);
        dcc::kernels::set_backend(simd);
        const double simd_val = dcc::kernels::sum_abs2(v.data(), n);
        CHECK(simd_val == doctest::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("argmin takes the first minimum on ties") {
    const double v[5] = {3.0, 1.5, 1.5, 2.0, 1.5};
    CHECK(dcc::kernels::argmin(v, 5) == 1);
    const double single[1] = {42.0};
    CHECK(dcc::kernels::argmin(single, 1) == 0);
}
