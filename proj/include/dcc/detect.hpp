// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "dcc/codec_block.hpp"
#include "dcc/diffraction.hpp"
#include "dcc/modem.hpp"

namespace dcc {

// Exhaustive maximum-likelihood detector: argmin over all datawords of
// ||y - G*modulate(d)||^2, ties toward the lexicographically smaller
// dataword. Precomputes the codebook once; detect() is the hot path.
class MlDetector {
public:
    MlDetector(const GeneratorMatrix& g, const ModulationScheme& m);

    // Thread-safe: shared state is read-only after construction.
    Dataword detect(std::span<const std::complex<double>> y) const;
    std::size_t hypothesis_count() const { return codebook_.size(); }
    const std::vector<CodebookEntry>& codebook() const { return codebook_; }

private:
    std::vector<CodebookEntry> codebook_;
    std::vector<std::complex<double>> flat_; // codewords, row-major
    std::size_t dim_;
};

// Linear MMSE estimate s_hat = G^H (G G^H + N0 I)^-1 y under a unit-energy
// symbol prior, followed by per-symbol slicing. Requires N0 > 0.
class MmseDetector {
public:
    MmseDetector(const GeneratorMatrix& g, const ModulationScheme& m, double n0);

    Dataword detect(std::span<const std::complex<double>> y) const;
    // The precomputed filter W (cols x rows), row-major.
    const std::vector<std::complex<double>>& filter() const { return w_; }

private:
    const ModulationScheme& m_;
    std::vector<std::complex<double>> w_;
    std::size_t rows_, cols_;
};

// Idealized dimension-reducing receiver: the exact left pseudo-inverse
// (G^H G)^-1 G^H followed by slicing. The best linear reducer, standing in
// for a trained multi-layer surface. Requires full column rank.
class ReducerDetector {
public:
    ReducerDetector(const GeneratorMatrix& g, const ModulationScheme& m);

    Dataword detect(std::span<const std::complex<double>> y) const;
    const std::vector<std::complex<double>>& filter() const { return w_; }

private:
    const ModulationScheme& m_;
    std::vector<std::complex<double>> w_;
    std::size_t rows_, cols_;
};

// One-shot conveniences.
Dataword detect_ml(const GeneratorMatrix& g, const ModulationScheme& m,
                   std::span<const std::complex<double>> y);
Dataword detect_mmse(const GeneratorMatrix& g, const ModulationScheme& m,
                     std::span<const std::complex<double>> y, double n0);
Dataword detect_reducer(const GeneratorMatrix& g, const ModulationScheme& m,
                        std::span<const std::complex<double>> y);

} // namespace dcc
