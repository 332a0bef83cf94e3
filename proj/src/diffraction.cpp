// SPDX-License-Identifier: Apache-2.0

#include "dcc/diffraction.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>

#include "dcc/errors.hpp"
#include "dcc/kernels.hpp"

namespace dcc {

double GeneratorMatrix::frobenius_norm_sq() const {
    return kernels::sum_abs2(entries.data(), entries.size());
}

std::complex<double> rs_coefficient(const Vec3& p, const Vec3& q, double wavelength_m) {
    if (!(wavelength_m > 0.0)) {
        throw DegenerateGeometry("wavelength must be positive");
    }
    const double dx = q.x - p.x;
    const double dy = q.y - p.y;
    const double dz = q.z - p.z;
    const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
    if (r == 0.0) {
        throw DegenerateGeometry("coincident source and field points");
    }
    if (dz <= 0.0) {
        throw DegenerateGeometry("field point must lie on a later plane (dz > 0)");
    }
    const double two_pi = 2.0 * std::numbers::pi;
    const std::complex<double> amplitude =
        (dz / (r * r)) *
        (std::complex<double>(1.0 / (two_pi * r), 0.0) + 1.0 / std::complex<double>(0.0, wavelength_m));
    return amplitude * std::polar(1.0, two_pi * r / wavelength_m);
}

GeneratorMatrix assemble_coefficients(const MetaAtomLayer& from, const MetaAtomLayer& to,
                                      double wavelength_m) {
    GeneratorMatrix g;
    g.rows = to.count();
    g.cols = from.count();
    g.entries.resize(g.rows * g.cols);
    for (std::size_t i = 0; i < g.rows; ++i) {
        for (std::size_t j = 0; j < g.cols; ++j) {
            g.at(i, j) = rs_coefficient(from.positions[j], to.positions[i], wavelength_m);
        }
    }
    return g;
}

GeneratorMatrix build_generator(const RisStack& stack, Normalization normalization,
                                double insertion_loss_db) {
    ValidationReport report = validate_stack(stack);
    if (!report.empty()) {
        throw ConstraintViolation("build_generator: stack fails validation:\n" + report.to_text());
    }
    if (insertion_loss_db < 0.0) {
        throw InvalidArgument("insertion_loss_db must be non-negative");
    }
    GeneratorMatrix g = assemble_coefficients(stack.layer1, stack.layer2,
                                              stack.carrier.wavelength_m);
    g.normalization = normalization;
    g.source_stack_digest = stack_digest(stack);
    g.insertion_loss_db = insertion_loss_db;
    double scale = 1.0;
    if (normalization == Normalization::unit_frobenius) {
        scale = std::sqrt(static_cast<double>(g.rows) / g.frobenius_norm_sq());
    }
    scale *= std::pow(10.0, -insertion_loss_db / 20.0);
    if (scale != 1.0) {
        for (auto& e : g.entries) {
            e *= scale;
        }
    }
    return g;
}

std::string generator_digest(const GeneratorMatrix& g) {
    std::uint64_t h = fnv1a64(&g.rows, sizeof(g.rows));
    h = fnv1a64(&g.cols, sizeof(g.cols), h);
    for (const auto& e : g.entries) {
        const double re = e.real();
        const double im = e.imag();
        h = fnv1a64(&re, sizeof(double), h);
        h = fnv1a64(&im, sizeof(double), h);
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_generator_csv(const GeneratorMatrix& g, std::ostream& out) {
    out << "row,col,re,im\n";
    char buf[128];
    for (std::size_t i = 0; i < g.rows; ++i) {
        for (std::size_t j = 0; j < g.cols; ++j) {
            const auto& e = g.at(i, j);
            std::snprintf(buf, sizeof(buf), "%zu,%zu,%.17g,%.17g\n", i, j, e.real(), e.imag());
            out << buf;
        }
    }
}

GeneratorMatrix read_generator_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("row,col", 0) != 0) {
        throw FileFormatError("generator CSV: missing 'row,col,re,im' header");
    }
    std::map<std::pair<std::size_t, std::size_t>, std::complex<double>> cells;
    std::size_t max_row = 0;
    std::size_t max_col = 0;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        std::size_t r = 0;
        std::size_t c = 0;
        double re = 0.0;
        double im = 0.0;
        if (std::sscanf(line.c_str(), "%zu,%zu,%lg,%lg", &r, &c, &re, &im) != 4) {
            throw FileFormatError("generator CSV line " + std::to_string(lineno) + ": parse error");
        }
        cells[{r, c}] = {re, im};
        max_row = std::max(max_row, r);
        max_col = std::max(max_col, c);
    }
    if (cells.empty()) {
        throw FileFormatError("generator CSV has no entries");
    }
    GeneratorMatrix g;
    g.rows = max_row + 1;
    g.cols = max_col + 1;
    if (cells.size() != g.rows * g.cols) {
        throw FileFormatError("generator CSV is missing entries for a dense matrix");
    }
    g.entries.resize(g.rows * g.cols);
    for (const auto& [key, value] : cells) {
        g.entries[key.first * g.cols + key.second] = value;
    }
    return g;
}

} // namespace dcc
