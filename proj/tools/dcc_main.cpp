// SPDX-License-Identifier: Apache-2.0

// Command-line frontend: every subcommand is a pure function of
// (config file, --set overrides, seed) to output bytes.
//
// Exit codes: 0 success, 2 config error, 3 constraint violation,
// 4 infeasible search space, 1 anything else.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "dcc/config.hpp"
#include "dcc/errors.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> config_paths; // compare only
    std::vector<std::string> overrides;
    std::string output;
    std::optional<std::uint64_t> seed;
    std::string bits; // encode only
};

void add_common(CLI::App* cmd, CommonArgs& args, bool multi_config = false) {
    if (multi_config) {
        cmd->add_option("--config", args.config_paths, "experiment config file (repeatable)")
            ->required();
    } else {
        cmd->add_option("--config", args.config_path, "experiment config file")->required();
    }
    cmd->add_option("--set", args.overrides, "override a config key, key.path=value");
    cmd->add_option("--output", args.output, "output file (default: config output or stdout)");
    cmd->add_option("--seed", args.seed, "override the master seed");
}

dcc::ExperimentConfig load(const CommonArgs& args, const std::string& path) {
    dcc::ExperimentConfig cfg = dcc::load_config(path, args.overrides);
    if (args.seed) {
        cfg.seed = *args.seed;
    }
    if (!args.output.empty()) {
        cfg.output = args.output;
    }
    return cfg;
}

// Writes to the configured output file, or stdout when none is set.
void emit(const std::string& output, const std::string& bytes) {
    if (output.empty()) {
        std::cout << bytes;
        return;
    }
    std::ofstream out(output, std::ios::binary);
    if (!out) {
        throw dcc::ConfigError("cannot open output file: " + output);
    }
    out << bytes;
}

int cmd_validate(const CommonArgs& args) {
    const dcc::ExperimentConfig cfg = load(args, args.config_path);
    dcc::RisStack stack = dcc::make_stack(cfg.geometry);
    const dcc::ValidationReport report = dcc::validate_stack(stack);
    if (report.empty()) {
        std::cout << "ok\n";
        return 0;
    }
    std::cout << report.to_text();
    return 3;
}

int cmd_gen_matrix(const CommonArgs& args) {
    const dcc::ExperimentConfig cfg = load(args, args.config_path);
    const dcc::GeneratorMatrix g = dcc::make_generator(cfg.geometry);
    std::ostringstream out;
    dcc::write_generator_csv(g, out);
    emit(cfg.output, out.str());
    return 0;
}

int cmd_encode(const CommonArgs& args) {
    const dcc::ExperimentConfig cfg = load(args, args.config_path);
    const dcc::GeneratorMatrix g = dcc::make_generator(cfg.geometry);
    const dcc::ModulationScheme& m = dcc::ModulationScheme::by_name(cfg.modulation);
    std::vector<std::uint8_t> bits;
    for (char c : args.bits) {
        if (c != '0' && c != '1') {
            throw dcc::ConfigError("--bits must be a 0/1 string");
        }
        bits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    const std::size_t need = g.cols * static_cast<std::size_t>(m.bits_per_symbol);
    if (bits.size() != need) {
        throw dcc::ConfigError("--bits must hold exactly " + std::to_string(need) +
                               " bits for this generator");
    }
    const dcc::Dataword d = dcc::bits_to_dataword(bits, m);
    const dcc::Codeword v = dcc::encode_block(g, dcc::modulate(d, m));
    std::ostringstream out;
    out << "index,re,im\n";
    char buf[96];
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g\n", i, v[i].real(), v[i].imag());
        out << buf;
    }
    emit(cfg.output, out.str());
    return 0;
}

int cmd_distance(const CommonArgs& args) {
    const dcc::ExperimentConfig cfg = load(args, args.config_path);
    const dcc::GeneratorMatrix g = dcc::make_generator(cfg.geometry);
    const dcc::ModulationScheme& m = dcc::ModulationScheme::by_name(cfg.modulation);
    const auto codebook = dcc::enumerate_codebook(g, m);
    const auto spectrum = dcc::distance_spectrum(codebook);
    std::ostringstream out;
    dcc::write_distance_csv(codebook, spectrum, out);
    emit(cfg.output, out.str());
    return 0;
}

int cmd_ber(const CommonArgs& args) {
    const dcc::ExperimentConfig cfg = load(args, args.config_path);
    const auto link = dcc::make_link(cfg);
    const auto points = dcc::sweep_points(cfg.snr);
    const dcc::BerCurve curve =
        dcc::run_ber(*link, points, cfg.stopping, cfg.seed, cfg.workers);
    std::ostringstream out;
    dcc::write_ber_csv(curve, out);
    emit(cfg.output, out.str());
    return 0;
}

int cmd_compare(const CommonArgs& args) {
    std::vector<dcc::BerCurve> curves;
    std::string output;
    for (const std::string& path : args.config_paths) {
        const dcc::ExperimentConfig cfg = load(args, path);
        if (output.empty()) {
            output = cfg.output;
        }
        const auto link = dcc::make_link(cfg);
        const auto points = dcc::sweep_points(cfg.snr);
        curves.push_back(dcc::run_ber(*link, points, cfg.stopping, cfg.seed, cfg.workers));
    }
    std::ostringstream out;
    dcc::write_ber_csv(curves, out);
    emit(output, out.str());
    return 0;
}

int cmd_optimize(const CommonArgs& args) {
    const dcc::ExperimentConfig cfg = load(args, args.config_path);
    const dcc::SearchSpace space = dcc::make_search_space(cfg);
    const dcc::ModulationScheme& m = dcc::ModulationScheme::by_name(cfg.modulation);
    dcc::OptimizeMethod method;
    if (cfg.optimize.method == "multistart_direct_search") {
        method = dcc::OptimizeMethod::multistart_direct_search;
    } else if (cfg.optimize.method == "grid") {
        method = dcc::OptimizeMethod::grid;
    } else {
        throw dcc::ConfigError("unknown optimize.method: " + cfg.optimize.method);
    }
    const dcc::OptimizerResult result =
        dcc::optimize(space, m, cfg.optimize.budget, cfg.seed, method);
    std::ostringstream geom;
    dcc::save_geometry_file(result.best_stack, geom);
    emit(cfg.output, geom.str());
    if (!cfg.optimize.trace_output.empty()) {
        std::ostringstream trace;
        dcc::write_trace_csv(result, trace);
        emit(cfg.optimize.trace_output, trace.str());
    }
    std::cerr << "best d_min " << result.best_d_min << " after " << result.evaluations
              << " evaluations\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"RIS diffractional channel coding toolkit"};
    app.require_subcommand(1);

    CommonArgs validate_args, gen_args, encode_args, distance_args, ber_args, compare_args,
        optimize_args;
    CLI::App* validate = app.add_subcommand("validate", "check geometry constraints");
    add_common(validate, validate_args);
    CLI::App* gen = app.add_subcommand("gen-matrix", "dump the generator matrix as CSV");
    add_common(gen, gen_args);
    CLI::App* encode = app.add_subcommand("encode", "encode one dataword over the air");
    add_common(encode, encode_args);
    encode->add_option("--bits", encode_args.bits, "input bits, e.g. 0110")->required();
    CLI::App* distance = app.add_subcommand("distance", "dump the code distance spectrum");
    add_common(distance, distance_args);
    CLI::App* ber = app.add_subcommand("ber", "run a Monte-Carlo BER sweep");
    add_common(ber, ber_args);
    CLI::App* compare = app.add_subcommand("compare", "merge BER sweeps of several configs");
    add_common(compare, compare_args, /*multi_config=*/true);
    CLI::App* optimize = app.add_subcommand("optimize", "max-min code distance geometry search");
    add_common(optimize, optimize_args);

    try {
        app.parse(argc, argv);
        if (validate->parsed()) return cmd_validate(validate_args);
        if (gen->parsed()) return cmd_gen_matrix(gen_args);
        if (encode->parsed()) return cmd_encode(encode_args);
        if (distance->parsed()) return cmd_distance(distance_args);
        if (ber->parsed()) return cmd_ber(ber_args);
        if (compare->parsed()) return cmd_compare(compare_args);
        if (optimize->parsed()) return cmd_optimize(optimize_args);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const dcc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const dcc::FileFormatError& e) {
        std::cerr << "file format error: " << e.what() << "\n";
        return 2;
    } catch (const dcc::ConstraintViolation& e) {
        std::cerr << "constraint violation: " << e.what() << "\n";
        return 3;
    } catch (const dcc::InfeasibleSpace& e) {
        std::cerr << "infeasible search space: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
