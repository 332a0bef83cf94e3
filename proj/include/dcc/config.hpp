// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dcc/codec_trellis.hpp"
#include "dcc/diffraction.hpp"
#include "dcc/geometry.hpp"
#include "dcc/links.hpp"
#include "dcc/optimizer.hpp"

namespace dcc {

// Typed view of the JSON experiment configuration. Key names are part of
// the CLI contract; see the README for the schema.
struct GeometryConfig {
    std::string preset;        // repetition_42 | systematic_42 | evenly_74 | lines
    std::string file;          // geometry file instead of a preset
    std::string generator_csv; // direct generator source (skips geometry)
    double frequency_hz = 0.0;
    std::map<std::string, double> params;
    bool allow_close_separation = false;
    double insertion_loss_db = 0.0;
    std::string normalization = "unit_frobenius";
};

struct CodeConfig {
    std::string type = "block"; // uncoded | block | trellis | hamming74 | conv213 | concat_hamming
    std::string variant = "extra_atoms";
    int k = 1;
    int n = 2;
    int mu = 3;
    std::string decision = "hard"; // hamming74 / conv213 decoding
    int frames_per_burst = 64;     // trellis data frames per simulated burst
    int message_len = 64;          // conv213 message bits per burst
    int symbols_per_frame = 1;     // uncoded frame length
};

struct SnrSweep {
    double start_db = 0.0;
    double stop_db = 10.0;
    double step_db = 2.0;
};

struct OptimizeConfig {
    std::size_t budget = 400;
    std::string method = "multistart_direct_search";
    bool move_separation = false;
    double separation_min_m = 0.0;
    double separation_max_m = 0.0;
    bool move_layer1_atoms = false;
    bool move_layer2_atoms = false;
    double aperture_halfwidth_m = 0.0;
    std::string trace_output;
};

struct ExperimentConfig {
    GeometryConfig geometry;
    std::string modulation = "bpsk";
    CodeConfig code;
    std::string detector = "ml";
    SnrSweep snr;
    StoppingRule stopping;
    std::uint64_t seed = 1;
    int workers = 1;
    std::string output;
    OptimizeConfig optimize;
};

// Loads a JSON config file and applies "--set key.path=value" overrides
// (values parse as JSON scalars, falling back to strings). Throws
// ConfigError with the offending key path.
ExperimentConfig load_config(const std::string& path,
                             const std::vector<std::string>& overrides);
ExperimentConfig parse_config_text(const std::string& text,
                                   const std::vector<std::string>& overrides);

// Assembly helpers shared by the CLI subcommands.
RisStack make_stack(const GeometryConfig& g);
GeneratorMatrix make_generator(const GeometryConfig& g);
std::unique_ptr<LinkModel> make_link(const ExperimentConfig& cfg);
SearchSpace make_search_space(const ExperimentConfig& cfg);
std::vector<double> sweep_points(const SnrSweep& sweep);

} // namespace dcc
