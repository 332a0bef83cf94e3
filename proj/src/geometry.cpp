// SPDX-License-Identifier: Apache-2.0

#include "dcc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "dcc/errors.hpp"

namespace dcc {
namespace {

double in_plane_distance(const Vec3& a, const Vec3& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

std::string fmt_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Nearest-neighbor spacing check for one layer. Layers with fewer than two
// atoms have no pitch to constrain.
void check_layer_spacing(const MetaAtomLayer& layer, const char* name, double lambda,
                         std::vector<Violation>& out) {
    const std::size_t n = layer.count();
    if (n < 2) {
        return;
    }
    const double lo = lambda / 10.0;
    const double hi = lambda / 2.0;
    for (std::size_t i = 0; i < n; ++i) {
        double nn = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) {
                nn = std::min(nn, in_plane_distance(layer.positions[i], layer.positions[j]));
            }
        }
        if (nn < lo) {
            out.push_back({constraint::spacing_below_min,
                           std::string(name) + " atom " + std::to_string(i) +
                               " nearest-neighbor spacing " + fmt_g17(nn) + " m < lambda/10 = " +
                               fmt_g17(lo) + " m",
                           nn});
        } else if (nn > hi) {
            out.push_back({constraint::spacing_above_max,
                           std::string(name) + " atom " + std::to_string(i) +
                               " nearest-neighbor spacing " + fmt_g17(nn) + " m > lambda/2 = " +
                               fmt_g17(hi) + " m",
                           nn});
        }
    }
}

void check_layer_structure(const MetaAtomLayer& layer, const char* name,
                           std::vector<Violation>& out) {
    if (layer.rows <= 0 || layer.cols <= 0 ||
        static_cast<std::size_t>(layer.rows) * static_cast<std::size_t>(layer.cols) !=
            layer.count()) {
        out.push_back({constraint::layer_shape_mismatch,
                       std::string(name) + " rows*cols = " +
                           std::to_string(layer.rows * layer.cols) + " but has " +
                           std::to_string(layer.count()) + " atoms",
                       static_cast<double>(layer.count())});
    }
    for (std::size_t i = 0; i < layer.count(); ++i) {
        if (layer.positions[i].z != layer.plane_z) {
            out.push_back({constraint::offplane_atom,
                           std::string(name) + " atom " + std::to_string(i) + " z = " +
                               fmt_g17(layer.positions[i].z) + " != plane_z = " +
                               fmt_g17(layer.plane_z),
                           layer.positions[i].z});
        }
    }
    for (std::size_t i = 0; i < layer.count(); ++i) {
        for (std::size_t j = i + 1; j < layer.count(); ++j) {
            const Vec3& a = layer.positions[i];
            const Vec3& b = layer.positions[j];
            if (a.x == b.x && a.y == b.y && a.z == b.z) {
                out.push_back({constraint::duplicate_position,
                               std::string(name) + " atoms " + std::to_string(i) + " and " +
                                   std::to_string(j) + " coincide",
                               0.0});
            }
        }
    }
}

void require_valid(const RisStack& stack, const char* preset) {
    ValidationReport report = validate_stack(stack);
    if (!report.empty()) {
        throw ConstraintViolation(std::string(preset) + ": " + report.to_text());
    }
}

} // namespace

CarrierSpec CarrierSpec::from_frequency(double frequency_hz) {
    if (!(frequency_hz > 0.0) || !std::isfinite(frequency_hz)) {
        throw ConstraintViolation("carrier frequency must be positive, got " +
                                  fmt_g17(frequency_hz));
    }
    return {frequency_hz, kSpeedOfLight / frequency_hz};
}

MetaAtomLayer MetaAtomLayer::line(int n, double pitch, double plane_z) {
    MetaAtomLayer layer;
    layer.rows = 1;
    layer.cols = n;
    layer.plane_z = plane_z;
    layer.positions.reserve(static_cast<std::size_t>(n));
    const double origin = -0.5 * pitch * (n - 1);
    for (int i = 0; i < n; ++i) {
        layer.positions.push_back({origin + pitch * i, 0.0, plane_z});
    }
    return layer;
}

std::string ValidationReport::to_text() const {
    std::string text;
    for (const Violation& v : violations) {
        text += v.constraint_id;
        text += ": ";
        text += v.detail;
        text += '\n';
    }
    return text;
}

ValidationReport validate_stack(const RisStack& stack) {
    ValidationReport report;
    auto& out = report.violations;

    const double lambda = stack.carrier.wavelength_m;
    const double expected_c = stack.carrier.wavelength_m * stack.carrier.frequency_hz;
    if (!(std::abs(expected_c - kSpeedOfLight) <= 1e-6 * kSpeedOfLight)) {
        out.push_back({constraint::carrier_mismatch,
                       "wavelength*frequency = " + fmt_g17(expected_c) + " m/s != c",
                       expected_c});
    }

    check_layer_structure(stack.layer1, "layer1", out);
    check_layer_structure(stack.layer2, "layer2", out);
    check_layer_spacing(stack.layer1, "layer1", lambda, out);
    check_layer_spacing(stack.layer2, "layer2", lambda, out);

    const double sep = stack.layer2.plane_z - stack.layer1.plane_z;
    if (stack.separation_m != sep) {
        out.push_back({constraint::separation_field_mismatch,
                       "separation_m = " + fmt_g17(stack.separation_m) +
                           " but plane_z difference is " + fmt_g17(sep),
                       stack.separation_m});
    }
    if (!(sep > 0.0)) {
        out.push_back({constraint::separation_nonpositive,
                       "layer separation " + fmt_g17(sep) + " m must be positive", sep});
    } else if (sep < 10.0 * lambda && !stack.allow_close_separation) {
        out.push_back({constraint::separation_below_rs_validity,
                       "layer separation " + fmt_g17(sep) +
                           " m is below the 10-lambda scalar-diffraction validity bound " +
                           fmt_g17(10.0 * lambda) + " m",
                       sep});
    }

    if (stack.layer1.count() >= stack.layer2.count()) {
        out.push_back({constraint::dimension_not_expanding,
                       "layer1 has " + std::to_string(stack.layer1.count()) +
                           " atoms, layer2 has " + std::to_string(stack.layer2.count()) +
                           "; the coded dimension must expand",
                       static_cast<double>(stack.layer1.count())});
    }
    return report;
}

RisStack preset_repetition_42(const CarrierSpec& carrier, double a, double h, double dz) {
    RisStack stack;
    stack.carrier = carrier;
    stack.layer1.rows = 1;
    stack.layer1.cols = 2;
    stack.layer1.plane_z = 0.0;
    // Layer-1 columns in ascending x.
    stack.layer1.positions = {{-a / 2, 0.0, 0.0}, {+a / 2, 0.0, 0.0}};

    stack.layer2.rows = 2;
    stack.layer2.cols = 2;
    stack.layer2.plane_z = dz;
    stack.layer2.positions = {{+a / 2, +h, dz}, {-a / 2, +h, dz}, {+a / 2, -h, dz}, {-a / 2, -h, dz}};
    stack.separation_m = dz;
    require_valid(stack, "preset_repetition_42");
    return stack;
}

RisStack preset_systematic_42(const CarrierSpec& carrier, double d, double dz) {
    RisStack stack;
    stack.carrier = carrier;
    stack.layer1 = MetaAtomLayer::line(2, d, 0.0);
    stack.layer2 = MetaAtomLayer::line(4, d, dz);
    stack.separation_m = dz;
    require_valid(stack, "preset_systematic_42");
    return stack;
}

RisStack preset_74_evenly_spaced(const CarrierSpec& carrier, double pitch, double dz) {
    RisStack stack;
    stack.carrier = carrier;
    stack.layer1 = MetaAtomLayer::line(4, pitch, 0.0);
    stack.layer2 = MetaAtomLayer::line(7, pitch, dz);
    stack.separation_m = dz;
    require_valid(stack, "preset_74_evenly_spaced");
    return stack;
}

RisStack preset_74_from_file(const std::string& path) {
    RisStack stack = load_geometry_file(path);
    if (stack.layer1.count() != 4 || stack.layer2.count() != 7) {
        throw ConstraintViolation("preset_74_from_file: expected 4 layer-1 and 7 layer-2 atoms, got " +
                                  std::to_string(stack.layer1.count()) + " and " +
                                  std::to_string(stack.layer2.count()));
    }
    require_valid(stack, "preset_74_from_file");
    return stack;
}

RisStack load_geometry_file(std::istream& in) {
    RisStack stack;
    bool have_frequency = false;
    std::vector<Vec3> atoms1, atoms2;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::istringstream ls(line);
        std::string first;
        ls >> first;
        if (first == "frequency_hz") {
            double f = 0.0;
            if (!(ls >> f)) {
                throw FileFormatError("geometry line " + std::to_string(lineno) +
                                      ": malformed frequency_hz");
            }
            stack.carrier = CarrierSpec::from_frequency(f);
            have_frequency = true;
            continue;
        }
        int layer = 0;
        Vec3 p;
        std::istringstream as(line);
        if (!(as >> layer >> p.x >> p.y >> p.z) || (layer != 1 && layer != 2)) {
            throw FileFormatError("geometry line " + std::to_string(lineno) +
                                  ": expected 'layer_index x y z' with layer 1 or 2");
        }
        (layer == 1 ? atoms1 : atoms2).push_back(p);
    }
    if (!have_frequency) {
        throw FileFormatError("geometry file missing frequency_hz header line");
    }
    if (atoms1.empty() || atoms2.empty()) {
        throw FileFormatError("geometry file must contain atoms on both layers");
    }
    stack.layer1.positions = std::move(atoms1);
    stack.layer1.rows = 1;
    stack.layer1.cols = static_cast<int>(stack.layer1.positions.size());
    stack.layer1.plane_z = stack.layer1.positions.front().z;
    stack.layer2.positions = std::move(atoms2);
    stack.layer2.rows = 1;
    stack.layer2.cols = static_cast<int>(stack.layer2.positions.size());
    stack.layer2.plane_z = stack.layer2.positions.front().z;
    stack.separation_m = stack.layer2.plane_z - stack.layer1.plane_z;
    return stack;
}

RisStack load_geometry_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw FileFormatError("cannot open geometry file: " + path);
    }
    return load_geometry_file(in);
}

void save_geometry_file(const RisStack& stack, std::ostream& out) {
    out << "# ris stack geometry\n";
    out << "frequency_hz " << fmt_g17(stack.carrier.frequency_hz) << "\n";
    for (int layer = 1; layer <= 2; ++layer) {
        const MetaAtomLayer& l = layer == 1 ? stack.layer1 : stack.layer2;
        for (const Vec3& p : l.positions) {
            out << layer << ' ' << fmt_g17(p.x) << ' ' << fmt_g17(p.y) << ' ' << fmt_g17(p.z)
                << "\n";
        }
    }
}

void save_geometry_file(const RisStack& stack, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw FileFormatError("cannot write geometry file: " + path);
    }
    save_geometry_file(stack, out);
}

std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t seed) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string stack_digest(const RisStack& stack) {
    std::uint64_t h = fnv1a64(&stack.carrier.frequency_hz, sizeof(double));
    for (const MetaAtomLayer* l : {&stack.layer1, &stack.layer2}) {
        for (const Vec3& p : l->positions) {
            h = fnv1a64(&p, sizeof(double) * 3, h);
        }
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace dcc
