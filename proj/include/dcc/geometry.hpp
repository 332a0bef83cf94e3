// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace dcc {

inline constexpr double kSpeedOfLight = 299792458.0; // m/s

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

struct CarrierSpec {
    double frequency_hz = 0.0;
    double wavelength_m = 0.0;

    // wavelength = c / frequency. Throws ConstraintViolation for f <= 0.
    static CarrierSpec from_frequency(double frequency_hz);
};

// One planar layer of meta-atoms. Positions are absolute 3-D coordinates in
// meters; every atom must sit exactly on plane_z.
struct MetaAtomLayer {
    std::vector<Vec3> positions;
    int rows = 1;
    int cols = 0;
    double plane_z = 0.0;

    std::size_t count() const { return positions.size(); }

    // A single row of `n` atoms along x, centered on the optical axis.
    static MetaAtomLayer line(int n, double pitch, double plane_z);
};

// Two parallel RIS layers plus the carrier. layer1 (K*L atoms) is the data
// aperture, layer2 (M*N atoms) the coded aperture.
struct RisStack {
    CarrierSpec carrier;
    MetaAtomLayer layer1;
    MetaAtomLayer layer2;
    double separation_m = 0.0; // layer2.plane_z - layer1.plane_z

    // Acknowledges operation below the 10-lambda scalar-diffraction validity
    // bound; validation then skips that one check.
    bool allow_close_separation = false;
};

struct Violation {
    std::string constraint_id;
    std::string detail;
    double measured = 0.0;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool empty() const { return violations.empty(); }
    // One "constraint_id: detail" line per violation.
    std::string to_text() const;
};

// Checks every structural and physical constraint; violations are data, not
// exceptions. Deterministic and side-effect free.
ValidationReport validate_stack(const RisStack& stack);

// Constraint ids emitted by validate_stack.
namespace constraint {
inline constexpr const char* spacing_below_min = "spacing_below_min";
inline constexpr const char* spacing_above_max = "spacing_above_max";
inline constexpr const char* separation_below_rs_validity = "separation_below_rs_validity";
inline constexpr const char* separation_nonpositive = "separation_nonpositive";
inline constexpr const char* dimension_not_expanding = "dimension_not_expanding";
inline constexpr const char* duplicate_position = "duplicate_position";
inline constexpr const char* offplane_atom = "offplane_atom";
inline constexpr const char* layer_shape_mismatch = "layer_shape_mismatch";
inline constexpr const char* carrier_mismatch = "carrier_mismatch";
inline constexpr const char* separation_field_mismatch = "separation_field_mismatch";
} // namespace constraint

// (4,2) repetition-style stack: 2 atoms at x = +-a/2 on layer 1, 4 atoms at
// (+-a/2, +-h) on layer 2. Centrosymmetric, so exactly two distinct
// cross-layer distances occur. Row order: (+a/2,+h), (-a/2,+h), (+a/2,-h),
// (-a/2,-h), which duplicates rows 1/3 and 2/4 of the generator.
RisStack preset_repetition_42(const CarrierSpec& carrier, double a, double h, double dz);

// (4,2) systematic-style stack: layer-2 atoms on a line at
// x in {-1.5d, -0.5d, +0.5d, +1.5d}; layer-1 atoms at x in {-0.5d, +0.5d}
// aligned with the inner pair. Exactly three distinct cross-layer distances.
RisStack preset_systematic_42(const CarrierSpec& carrier, double d, double dz);

// (7,4) stack with both layers as evenly spaced centered lines.
RisStack preset_74_evenly_spaced(const CarrierSpec& carrier, double pitch, double dz);

// (7,4) stack loaded from a geometry file; rejects anything that is not a
// valid 4-atom / 7-atom expanding stack.
RisStack preset_74_from_file(const std::string& path);

// Geometry file format: '#' comment lines, a "frequency_hz <value>" header
// line, then one atom per line "layer_index x y z" (layer_index 1 or 2),
// all values %.17g so positions round-trip bit-exact.
RisStack load_geometry_file(std::istream& in);
RisStack load_geometry_file(const std::string& path);
void save_geometry_file(const RisStack& stack, std::ostream& out);
void save_geometry_file(const RisStack& stack, const std::string& path);

// Stable fingerprint of carrier + atom positions.
std::string stack_digest(const RisStack& stack);

// FNV-1a over raw bytes; shared by the digest helpers.
std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t seed = 0xcbf29ce484222325ull);

} // namespace dcc
