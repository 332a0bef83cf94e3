// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "dcc/geometry.hpp"

namespace dcc {

enum class Normalization {
    raw,
    unit_frobenius,
};

// Complex generator matrix mapping the K*L uncoded signal to the M*N coded
// signal. Row-major storage, rows = M*N, cols = K*L.
struct GeneratorMatrix {
    std::vector<std::complex<double>> entries;
    std::size_t rows = 0;
    std::size_t cols = 0;
    Normalization normalization = Normalization::raw;
    std::string source_stack_digest;
    double insertion_loss_db = 0.0;

    std::complex<double>& at(std::size_t r, std::size_t c) { return entries[r * cols + c]; }
    const std::complex<double>& at(std::size_t r, std::size_t c) const {
        return entries[r * cols + c];
    }
    double frobenius_norm_sq() const;
};

// First Rayleigh-Sommerfeld propagation coefficient between a source point p
// and a field point q on a later plane:
//   w = (dz / r^2) * (1/(2*pi*r) + 1/(j*lambda)) * exp(j*2*pi*r/lambda)
// with r = |q - p| and dz = q.z - p.z. Throws DegenerateGeometry when r = 0
// or dz <= 0.
std::complex<double> rs_coefficient(const Vec3& p, const Vec3& q, double wavelength_m);

// Assembles entry (i, j) = rs_coefficient(layer1 atom j, layer2 atom i).
// Under unit_frobenius the matrix is scaled so ||G||_F^2 = rows (pre-loss);
// insertion loss then multiplies all entries by 10^(-loss_db/20).
// Validation violations on the stack are errors here.
GeneratorMatrix build_generator(const RisStack& stack,
                                Normalization normalization = Normalization::unit_frobenius,
                                double insertion_loss_db = 0.0);

// Raw coefficient matrix between two arbitrary layers; no validation, no
// normalization. Building block for the trellis variants.
GeneratorMatrix assemble_coefficients(const MetaAtomLayer& from, const MetaAtomLayer& to,
                                      double wavelength_m);

// Stable full-precision fingerprint of shape + entries.
std::string generator_digest(const GeneratorMatrix& g);

// CSV dump "row,col,re,im", 17 significant digits (round-trips bit-exact).
void write_generator_csv(const GeneratorMatrix& g, std::ostream& out);
GeneratorMatrix read_generator_csv(std::istream& in);

} // namespace dcc
