// SPDX-License-Identifier: Apache-2.0

#include "dcc/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dcc/errors.hpp"

namespace dcc {
namespace {

using nlohmann::json;

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
}

void apply_overrides(json& j, const std::vector<std::string>& overrides) {
    for (const std::string& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw ConfigError("override must look like key.path=value, got: " + kv);
        }
        std::string path = "/" + kv.substr(0, eq);
        for (auto& c : path) {
            if (c == '.') {
                c = '/';
            }
        }
        const std::string raw = kv.substr(eq + 1);
        json value;
        try {
            value = json::parse(raw);
        } catch (const json::exception&) {
            value = raw; // plain string
        }
        try {
            j[json::json_pointer(path)] = value;
        } catch (const json::exception& e) {
            throw ConfigError("cannot apply override " + kv + ": " + e.what());
        }
    }
}

template <typename T>
T require(const json& j, const std::string& path) {
    const json* node = &j;
    std::string walked;
    std::istringstream keys(path);
    std::string key;
    while (std::getline(keys, key, '.')) {
        walked = walked.empty() ? key : walked + "." + key;
        if (!node->is_object() || !node->contains(key)) {
            throw ConfigError("missing required key: " + walked);
        }
        node = &(*node)[key];
    }
    try {
        return node->get<T>();
    } catch (const json::exception&) {
        throw ConfigError("key has the wrong type: " + path);
    }
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
    if (!j.is_object() || !j.contains(key)) {
        return fallback;
    }
    try {
        return j[key].get<T>();
    } catch (const json::exception&) {
        throw ConfigError("key has the wrong type: " + key);
    }
}

ExperimentConfig from_json(const json& j) {
    ExperimentConfig cfg;
    cfg.seed = get_or<std::uint64_t>(j, "seed", 1);
    cfg.workers = get_or<int>(j, "workers", 1);
    cfg.output = get_or<std::string>(j, "output", "");
    cfg.modulation = get_or<std::string>(j, "modulation", "bpsk");
    cfg.detector = get_or<std::string>(j, "detector", "ml");

    if (j.contains("geometry")) {
        const json& g = j["geometry"];
        cfg.geometry.preset = get_or<std::string>(g, "preset", "");
        cfg.geometry.file = get_or<std::string>(g, "file", "");
        cfg.geometry.generator_csv = get_or<std::string>(g, "generator_csv", "");
        cfg.geometry.frequency_hz = get_or<double>(g, "frequency_hz", 0.0);
        cfg.geometry.allow_close_separation = get_or<bool>(g, "allow_close_separation", false);
        cfg.geometry.insertion_loss_db = get_or<double>(g, "insertion_loss_db", 0.0);
        cfg.geometry.normalization =
            get_or<std::string>(g, "normalization", "unit_frobenius");
        if (g.contains("params")) {
            if (!g["params"].is_object()) {
                throw ConfigError("key has the wrong type: geometry.params");
            }
            for (const auto& [key, value] : g["params"].items()) {
                if (!value.is_number()) {
                    throw ConfigError("geometry.params." + key + " must be a number");
                }
                cfg.geometry.params[key] = value.get<double>();
            }
        }
    }

    if (j.contains("code")) {
        const json& c = j["code"];
        cfg.code.type = get_or<std::string>(c, "type", "block");
        cfg.code.variant = get_or<std::string>(c, "variant", "extra_atoms");
        cfg.code.k = get_or<int>(c, "k", 1);
        cfg.code.n = get_or<int>(c, "n", 2);
        cfg.code.mu = get_or<int>(c, "mu", 3);
        cfg.code.decision = get_or<std::string>(c, "decision", "hard");
        cfg.code.frames_per_burst = get_or<int>(c, "frames_per_burst", 64);
        cfg.code.message_len = get_or<int>(c, "message_len", 64);
        cfg.code.symbols_per_frame = get_or<int>(c, "symbols_per_frame", 1);
    }

    if (j.contains("snr")) {
        cfg.snr.start_db = require<double>(j, "snr.start_db");
        cfg.snr.stop_db = require<double>(j, "snr.stop_db");
        cfg.snr.step_db = require<double>(j, "snr.step_db");
    }

    if (j.contains("stopping")) {
        cfg.stopping.target_errors =
            get_or<std::uint64_t>(j["stopping"], "target_errors", 100);
        cfg.stopping.max_bits = get_or<std::uint64_t>(j["stopping"], "max_bits", 10'000'000);
    }

    if (j.contains("optimize")) {
        const json& o = j["optimize"];
        cfg.optimize.budget = get_or<std::size_t>(o, "budget", 400);
        cfg.optimize.method = get_or<std::string>(o, "method", "multistart_direct_search");
        cfg.optimize.move_separation = get_or<bool>(o, "move_separation", false);
        cfg.optimize.separation_min_m = get_or<double>(o, "separation_min_m", 0.0);
        cfg.optimize.separation_max_m = get_or<double>(o, "separation_max_m", 0.0);
        cfg.optimize.move_layer1_atoms = get_or<bool>(o, "move_layer1_atoms", false);
        cfg.optimize.move_layer2_atoms = get_or<bool>(o, "move_layer2_atoms", false);
        cfg.optimize.aperture_halfwidth_m = get_or<double>(o, "aperture_halfwidth_m", 0.0);
        cfg.optimize.trace_output = get_or<std::string>(o, "trace_output", "");
    }
    return cfg;
}

double require_param(const GeometryConfig& g, const std::string& name) {
    const auto it = g.params.find(name);
    if (it == g.params.end()) {
        throw ConfigError("missing required key: geometry.params." + name);
    }
    return it->second;
}

} // namespace

ExperimentConfig parse_config_text(const std::string& text,
                                   const std::vector<std::string>& overrides) {
    json j = parse_json(text);
    apply_overrides(j, overrides);
    if (!j.is_object()) {
        throw ConfigError("config root must be a JSON object");
    }
    return from_json(j);
}

ExperimentConfig load_config(const std::string& path,
                             const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path);
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), overrides);
}

RisStack make_stack(const GeometryConfig& g) {
    if (!g.file.empty()) {
        RisStack stack = load_geometry_file(g.file);
        stack.allow_close_separation = g.allow_close_separation;
        return stack;
    }
    if (g.preset.empty()) {
        throw ConfigError("missing required key: geometry.preset (or geometry.file)");
    }
    if (!(g.frequency_hz > 0.0)) {
        throw ConfigError("missing required key: geometry.frequency_hz");
    }
    const CarrierSpec carrier = CarrierSpec::from_frequency(g.frequency_hz);
    if (g.preset == "repetition_42") {
        const double a = require_param(g, "a");
        const double h = require_param(g, "h");
        const double dz = require_param(g, "dz");
        return preset_repetition_42(carrier, a, h, dz);
    }
    if (g.preset == "systematic_42") {
        const double d = require_param(g, "d");
        const double dz = require_param(g, "dz");
        return preset_systematic_42(carrier, d, dz);
    }
    if (g.preset == "evenly_74") {
        const double pitch = require_param(g, "pitch");
        const double dz = require_param(g, "dz");
        return preset_74_evenly_spaced(carrier, pitch, dz);
    }
    if (g.preset == "lines") {
        RisStack stack;
        stack.carrier = carrier;
        const int n1 = static_cast<int>(require_param(g, "n1"));
        const int n2 = static_cast<int>(require_param(g, "n2"));
        const double pitch = require_param(g, "pitch");
        const double dz = require_param(g, "dz");
        stack.layer1 = MetaAtomLayer::line(n1, pitch, 0.0);
        stack.layer2 = MetaAtomLayer::line(n2, pitch, dz);
        stack.separation_m = dz;
        stack.allow_close_separation = g.allow_close_separation;
        return stack;
    }
    throw ConfigError("unknown geometry.preset: " + g.preset);
}

GeneratorMatrix make_generator(const GeometryConfig& g) {
    if (!g.generator_csv.empty()) {
        std::ifstream in(g.generator_csv);
        if (!in) {
            throw ConfigError("cannot open generator CSV: " + g.generator_csv);
        }
        GeneratorMatrix gm = read_generator_csv(in);
        gm.source_stack_digest = generator_digest(gm);
        return gm;
    }
    Normalization norm;
    if (g.normalization == "unit_frobenius") {
        norm = Normalization::unit_frobenius;
    } else if (g.normalization == "raw") {
        norm = Normalization::raw;
    } else {
        throw ConfigError("unknown geometry.normalization: " + g.normalization);
    }
    return build_generator(make_stack(g), norm, g.insertion_loss_db);
}

std::unique_ptr<LinkModel> make_link(const ExperimentConfig& cfg) {
    const ModulationScheme& m = ModulationScheme::by_name(cfg.modulation);
    const std::string& type = cfg.code.type;
    if (type == "uncoded") {
        return make_uncoded_link(m, static_cast<std::size_t>(cfg.code.symbols_per_frame));
    }
    if (type == "block") {
        return make_block_dcc_link(make_generator(cfg.geometry), m,
                                   detector_by_name(cfg.detector));
    }
    if (type == "trellis") {
        TrellisSpec spec;
        if (cfg.code.variant == "extra_atoms") {
            spec.variant = TrellisVariant::extra_atoms;
        } else if (cfg.code.variant == "after_memory") {
            spec.variant = TrellisVariant::after_memory;
        } else if (cfg.code.variant == "ahead_memory") {
            spec.variant = TrellisVariant::ahead_memory;
        } else {
            throw ConfigError("unknown code.variant: " + cfg.code.variant);
        }
        spec.k = cfg.code.k;
        spec.n = cfg.code.n;
        spec.mu = cfg.code.mu;
        spec.b = m.bits_per_symbol;
        TrellisParts parts = build_trellis_generator(make_stack(cfg.geometry), spec);
        return make_trellis_dcc_link(spec, std::move(parts), m,
                                     static_cast<std::size_t>(cfg.code.frames_per_burst));
    }
    if (type == "hamming74") {
        return make_hamming74_link(cfg.code.decision == "soft");
    }
    if (type == "conv213") {
        return make_conv213_link(cfg.code.decision == "soft",
                                 static_cast<std::size_t>(cfg.code.message_len));
    }
    if (type == "concat_hamming") {
        return make_concat_link(make_generator(cfg.geometry), m);
    }
    throw ConfigError("unknown code.type: " + type);
}

SearchSpace make_search_space(const ExperimentConfig& cfg) {
    SearchSpace space;
    space.base = make_stack(cfg.geometry);
    space.move_separation = cfg.optimize.move_separation;
    space.separation_min_m = cfg.optimize.separation_min_m;
    space.separation_max_m = cfg.optimize.separation_max_m;
    space.move_layer1_atoms = cfg.optimize.move_layer1_atoms;
    space.move_layer2_atoms = cfg.optimize.move_layer2_atoms;
    space.aperture_halfwidth_m = cfg.optimize.aperture_halfwidth_m;
    return space;
}

std::vector<double> sweep_points(const SnrSweep& sweep) {
    if (!(sweep.step_db > 0.0)) {
        throw ConfigError("snr.step_db must be positive");
    }
    if (sweep.stop_db < sweep.start_db) {
        throw ConfigError("snr sweep is empty (stop_db < start_db)");
    }
    std::vector<double> points;
    for (double v = sweep.start_db; v <= sweep.stop_db + 1e-9; v += sweep.step_db) {
        points.push_back(v);
    }
    return points;
}

} // namespace dcc
