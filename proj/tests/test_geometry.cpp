// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "dcc/errors.hpp"
#include "dcc/geometry.hpp"

using namespace dcc;

namespace {

const CarrierSpec kCarrier = CarrierSpec::from_frequency(25e9);
const double kLambda = kCarrier.wavelength_m;

bool has_violation(const ValidationReport& report, const std::string& id) {
    return std::any_of(report.violations.begin(), report.violations.end(),
                       [&](const Violation& v) { return v.constraint_id == id; });
}

// All 8 cross-layer atom-pair distances of a (4,2) stack.
std::multiset<double> cross_distances(const RisStack& stack) {
    std::multiset<double> dists;
    for (const Vec3& p : stack.layer1.positions) {
        for (const Vec3& q : stack.layer2.positions) {
            dists.insert(std::hypot(std::hypot(q.x - p.x, q.y - p.y), q.z - p.z));
        }
    }
    return dists;
}

std::size_t distinct_within(const std::multiset<double>& values, double tol) {
    std::size_t distinct = 0;
    double last = -1.0;
    for (double v : values) {
        if (distinct == 0 || v - last > tol) {
            ++distinct;
            last = v;
        }
    }
    return distinct;
}

} // namespace

TEST_CASE("carrier wavelength is c/f") {
    CHECK(kCarrier.wavelength_m * kCarrier.frequency_hz ==
          doctest::Approx(kSpeedOfLight).epsilon(1e-12));
    CHECK_THROWS_AS(CarrierSpec::from_frequency(0.0), ConstraintViolation);
    CHECK_THROWS_AS(CarrierSpec::from_frequency(-1.0), ConstraintViolation);
}

TEST_CASE("stack inside all bounds validates clean") {
    const RisStack stack =
        preset_repetition_42(kCarrier, kLambda / 4, kLambda / 4, 15 * kLambda);
    CHECK(validate_stack(stack).empty());
}

TEST_CASE("spacing below lambda/10 is reported with the measured value") {
    RisStack stack = preset_repetition_42(kCarrier, kLambda / 4, kLambda / 4, 15 * kLambda);
    // Narrow layer 1 by hand to lambda/20.
    stack.layer1.positions[0].x = -kLambda / 40;
    stack.layer1.positions[1].x = +kLambda / 40;
    const ValidationReport report = validate_stack(stack);
    CHECK(has_violation(report, constraint::spacing_below_min));
    for (const Violation& v : report.violations) {
        if (v.constraint_id == constraint::spacing_below_min) {
            CHECK(v.measured == doctest::Approx(kLambda / 20).epsilon(1e-12));
        }
    }
}

TEST_CASE("separation below 10 lambda needs the override") {
    RisStack stack = preset_repetition_42(kCarrier, kLambda / 4, kLambda / 4, 15 * kLambda);
    const double dz = 5 * kLambda;
    stack.separation_m = dz;
    stack.layer2.plane_z = dz;
    for (auto& p : stack.layer2.positions) {
        p.z = dz;
    }
    ValidationReport report = validate_stack(stack);
    CHECK(has_violation(report, constraint::separation_below_rs_validity));

    stack.allow_close_separation = true;
    report = validate_stack(stack);
    CHECK(report.empty());
}

TEST_CASE("validation is deterministic and side-effect free") {
    RisStack stack = preset_repetition_42(kCarrier, kLambda / 2, kLambda / 2, 10 * kLambda);
    // Force a spacing violation.
    stack.layer1.positions[0].x = -kLambda / 40;
    stack.layer1.positions[1].x = +kLambda / 40;
    const ValidationReport a = validate_stack(stack);
    const ValidationReport b = validate_stack(stack);
    CHECK(a.to_text() == b.to_text());
    CHECK_FALSE(a.empty());
}

TEST_CASE("report text lists constraint ids") {
    RisStack stack = preset_repetition_42(kCarrier, kLambda / 4, kLambda / 4, 15 * kLambda);
    stack.layer1.positions[0].x = stack.layer1.positions[1].x;
    stack.layer1.positions[0].y = stack.layer1.positions[1].y;
    const std::string text = validate_stack(stack).to_text();
    CHECK(text.find("duplicate_position:") != std::string::npos);
}

TEST_CASE("repetition preset has exactly two distinct cross distances") {
    for (const double a : {kLambda / 4, kLambda / 2, kLambda / 3}) {
        for (const double h : {kLambda / 4, kLambda / 2}) {
            for (const double dz : {10 * kLambda, 17 * kLambda}) {
                const RisStack stack = preset_repetition_42(kCarrier, a, h, dz);
                CHECK(distinct_within(cross_distances(stack), 1e-12) == 2);
                CHECK(validate_stack(stack).empty());
            }
        }
    }
}

TEST_CASE("repetition preset rejects out-of-bound spacing") {
    CHECK_THROWS_AS(preset_repetition_42(kCarrier, kLambda / 20, kLambda / 4, 15 * kLambda),
                    ConstraintViolation);
}

TEST_CASE("systematic preset has exactly three distinct cross distances") {
    const RisStack near = preset_systematic_42(kCarrier, kLambda / 2, 10 * kLambda);
    CHECK(distinct_within(cross_distances(near), 1e-12) == 3);
    // Alignment does not depend on the separation.
    const RisStack far = preset_systematic_42(kCarrier, kLambda / 2, 20 * kLambda);
    CHECK(distinct_within(cross_distances(far), 1e-12) == 3);
    CHECK(validate_stack(near).empty());
}

TEST_CASE("systematic preset rejects sub-10-lambda separation") {
    CHECK_THROWS_AS(preset_systematic_42(kCarrier, kLambda / 2, 9 * kLambda),
                    ConstraintViolation);
}

TEST_CASE("(7,4) preset validates and shapes correctly") {
    const RisStack stack = preset_74_evenly_spaced(kCarrier, kLambda / 2, 10 * kLambda);
    CHECK(stack.layer1.count() == 4);
    CHECK(stack.layer2.count() == 7);
    CHECK(validate_stack(stack).empty());
}

TEST_CASE("geometry file round-trips bit-exact") {
    const RisStack stack = preset_74_evenly_spaced(kCarrier, kLambda / 2, 12 * kLambda);
    std::stringstream file;
    save_geometry_file(stack, file);
    const RisStack loaded = load_geometry_file(file);
    REQUIRE(loaded.layer1.count() == stack.layer1.count());
    REQUIRE(loaded.layer2.count() == stack.layer2.count());
    CHECK(loaded.carrier.frequency_hz == stack.carrier.frequency_hz);
    for (std::size_t i = 0; i < stack.layer1.count(); ++i) {
        CHECK(loaded.layer1.positions[i].x == stack.layer1.positions[i].x);
        CHECK(loaded.layer1.positions[i].y == stack.layer1.positions[i].y);
        CHECK(loaded.layer1.positions[i].z == stack.layer1.positions[i].z);
    }
    for (std::size_t i = 0; i < stack.layer2.count(); ++i) {
        CHECK(loaded.layer2.positions[i].x == stack.layer2.positions[i].x);
    }
}

TEST_CASE("reversed dimensions are rejected (code must expand)") {
    // 7 atoms on layer 1, 4 on layer 2.
    RisStack reversed;
    reversed.carrier = kCarrier;
    reversed.layer1 = MetaAtomLayer::line(7, kLambda / 2, 0.0);
    reversed.layer2 = MetaAtomLayer::line(4, kLambda / 2, 10 * kLambda);
    reversed.separation_m = 10 * kLambda;
    CHECK(has_violation(validate_stack(reversed), constraint::dimension_not_expanding));

    std::stringstream file;
    save_geometry_file(reversed, file);
    char path[] = "/tmp/dcc_geom_reversed_XXXXXX";
    const int fd = mkstemp(path);
    REQUIRE(fd >= 0);
    FILE* f = fdopen(fd, "w");
    std::fputs(file.str().c_str(), f);
    std::fclose(f);
    CHECK_THROWS_AS(preset_74_from_file(path), ConstraintViolation);
    std::remove(path);
}

TEST_CASE("malformed geometry files raise FileFormatError") {
    std::stringstream no_header("1 0 0 0\n2 0 0 1\n");
    CHECK_THROWS_AS(load_geometry_file(no_header), FileFormatError);
    std::stringstream bad_layer("frequency_hz 25e9\n3 0 0 0\n");
    CHECK_THROWS_AS(load_geometry_file(bad_layer), FileFormatError);
}

TEST_CASE("stack digest distinguishes geometries") {
    const RisStack a = preset_74_evenly_spaced(kCarrier, kLambda / 2, 10 * kLambda);
    RisStack b = a;
    CHECK(stack_digest(a) == stack_digest(b));
    b.layer2.positions[3].x += 1e-6;
    CHECK(stack_digest(a) != stack_digest(b));
}
