// SPDX-License-Identifier: Apache-2.0
//
// uavrelay command-line front end.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uavrelay/analysis.hpp"
#include "uavrelay/channel.hpp"
#include "uavrelay/experiment.hpp"
#include "uavrelay/specfun.hpp"

namespace fs = std::filesystem;
using namespace uavrelay;

namespace {

constexpr int kExitIncomplete = 1;
constexpr int kExitError = 2;

void report_point_errors(const SepCurve& curve) {
    for (const auto& p : curve.points) {
        for (const auto& e : p.errors) std::cerr << curve.name << " x=" << p.x << ": " << e << '\n';
    }
}

int run_one(ExperimentSpec spec, std::optional<std::uint64_t> seed, std::optional<int> workers,
            const std::optional<fs::path>& out) {
    if (seed) spec.simulation.seed = *seed;
    const int n_workers = resolve_workers(workers, spec.simulation.workers);
    const SepCurve curve = run_experiment(spec, n_workers);
    if (out) {
        write_csv(curve, *out);
    } else {
        emit_csv(curve, std::cout);
    }
    report_point_errors(curve);
    return curve.complete() ? 0 : kExitIncomplete;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dual-hop UAV relay SEP analysis and simulation"};
    app.require_subcommand(1);

    std::string spec_path;
    std::optional<std::string> out_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;

    auto* run = app.add_subcommand("run", "Run an experiment spec and emit CSV");
    run->add_option("spec", spec_path, "Experiment spec (INI)")->required()->check(CLI::ExistingFile);
    run->add_option("--out,-o", out_path, "CSV output path (default: stdout)");
    run->add_option("--seed", seed, "Override the spec seed");
    run->add_option("--workers", workers, "Simulation threads")->check(CLI::PositiveNumber);

    std::string preset_name;
    std::string preset_out = ".";
    auto* preset = app.add_subcommand("preset", "Run a figure preset, one CSV per curve");
    preset->add_option("name", preset_name, "fig2, fig3 or fig4")->required()->check(CLI::IsMember({"fig2", "fig3", "fig4"}));
    preset->add_option("--out,-o", preset_out, "Output directory");
    preset->add_option("--seed", seed, "Override the preset seed");
    preset->add_option("--workers", workers, "Simulation threads")->check(CLI::PositiveNumber);

    std::vector<double> sigmas;
    std::vector<double> k_factors;
    auto* convert = app.add_subcommand("convert", "Moment-match log-normal / Rician parameters to Nakagami severities");
    convert->add_option("--sigma-db", sigmas, "Log-normal shadowing spread in dB");
    convert->add_option("--k-db", k_factors, "Rician K factor in dB");

    int m_g = 1;
    int m_h = 1;
    int order = 2;
    int n_r = 1;
    auto* zeta = app.add_subcommand("zeta", "Print zeta and the diversity/array gains");
    zeta->add_option("--m-g", m_g, "Shadowing severity")->check(CLI::PositiveNumber);
    zeta->add_option("--m-h", m_h, "Fading severity")->check(CLI::PositiveNumber);
    zeta->add_option("--M", order, "Modulation order (= number of patterns)");
    zeta->add_option("--N-R", n_r, "Receive antennas")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            std::optional<fs::path> out;
            if (out_path) out = *out_path;
            return run_one(load_spec(spec_path), seed, workers, out);
        }
        if (*preset) {
            fs::create_directories(preset_out);
            int status = 0;
            for (const auto& file : preset_files(preset_name)) {
                const ExperimentSpec spec = load_spec(file);
                const fs::path out = fs::path(preset_out) / (spec.name + ".csv");
                std::cerr << "running " << file.filename().string() << " -> " << out.string() << '\n';
                status = std::max(status, run_one(spec, seed, workers, out));
            }
            return status;
        }
        if (*convert) {
            if (sigmas.empty() && k_factors.empty()) {
                std::cerr << "convert: give --sigma-db and/or --k-db\n";
                return kExitError;
            }
            for (double s : sigmas) std::printf("sigma_dB=%g m_g=%d\n", s, lognormal_to_nakagami(s));
            for (double k : k_factors) std::printf("K_dB=%g m_h=%d\n", k, rician_k_to_nakagami(k));
            return 0;
        }
        if (*zeta) {
            SystemConfig config;
            config.M = order;
            config.N_pat = order;
            config.N_R = n_r;
            config.hop1 = ChannelParams{m_g, m_h};
            config.hop2 = config.hop1;
            const GainReport g = gains(config);
            std::printf("zeta=%.15g\n", g.zeta);
            std::printf("upsilon=%.15g\n", g.upsilon);
            std::printf("diversity_hop1=%d\narray_gain_hop1=%.15g\n", g.diversity_hop1, g.array_gain_hop1);
            std::printf("diversity_hop2=%d\narray_gain_hop2=%.15g\n", g.diversity_hop2, g.array_gain_hop2);
            std::printf("overall_diversity=%d\n", g.overall_diversity);
            std::printf("bandwidth_efficiency=%g\n", config.bandwidth_efficiency());
            return 0;
        }
    } catch (const SpecValidationError& e) {
        std::cerr << e.what() << '\n';
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
