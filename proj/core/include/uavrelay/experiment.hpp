// SPDX-License-Identifier: Apache-2.0
//
// Experiment specs (INI files), sweeps and CSV emission.

#ifndef UAVRELAY_EXPERIMENT_HPP
#define UAVRELAY_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "uavrelay/analysis.hpp"
#include "uavrelay/geometry.hpp"
#include "uavrelay/simulator.hpp"

namespace uavrelay {

/// Malformed file: syntax errors or values that do not parse.
class SpecParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Well-formed file that violates one or more invariants.
class SpecValidationError : public std::runtime_error {
public:
    explicit SpecValidationError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const { return problems_; }

private:
    std::vector<std::string> problems_;
};

enum class SweepAxis { SnrDb, DistanceM };
enum class Output { ClosedForm, UnionBound, Asymptotic, Simulation };

std::string_view to_string(SweepAxis axis);
std::string_view to_string(Output output);

struct SimulationControls {
    std::uint64_t max_trials = 100000000;
    std::uint64_t target_errors = 200;
    std::uint64_t seed = 1;
    std::optional<int> workers;
    std::size_t mgf_samples = kDefaultMgfSamples;
    int quad_order = kDefaultQuadOrder;
};

struct ExperimentSpec {
    std::string name;
    SweepAxis axis = SweepAxis::SnrDb;
    std::vector<double> values;
    std::vector<Output> outputs;

    int M = 2;
    int N_R = 1;
    ChannelParams channel;  // used on both hops
    std::optional<double> sigma_dB;
    std::optional<double> k_dB;

    Environment environment = Environment::Urban;
    double uav_height_m = 100.0;
    double carrier_hz = 2e9;
    double pathloss_exponent = 2.0;
    double ue_power_dBm = 23.0;
    double uav_power_dBm = 23.0;
    double noise_density_dBm_per_hz = -174.0;
    double bandwidth_hz = 10e6;

    SimulationControls simulation;

    bool wants(Output output) const;
    /// Per-hop average SNRs at sweep value x. On the distance axis x is the
    /// total ground distance, split evenly between the hops.
    std::pair<double, double> omegas_at(double x) const;
    SystemConfig system_at(double x) const;
};

/// Parses and validates a spec. Throws SpecParseError (with file:line) or
/// SpecValidationError listing every problem.
ExperimentSpec parse_spec(std::string_view text, const std::string& source = "<string>");
ExperimentSpec load_spec(const std::filesystem::path& path);

struct SepPoint {
    double x = 0.0;
    double omega1 = 0.0;
    double omega2 = 0.0;
    std::optional<double> sep_closed;
    std::optional<double> sep_bound;
    std::optional<double> sep_asymp;
    std::optional<double> sep_sim;
    std::optional<double> sim_stderr;
    std::optional<std::uint64_t> trials;
    // Per-hop simulation estimates; not part of the CSV.
    std::optional<SepEstimate> hop1_sim;
    std::optional<SepEstimate> hop2_sim;
    std::vector<std::string> errors;
};

struct SepCurve {
    std::string name;
    std::string axis_label;
    std::string axis_units;
    std::vector<Output> outputs;
    std::vector<SepPoint> points;

    /// True when every point carries every requested output.
    bool complete() const;
};

/// Resolves the worker count: explicit flag, then the spec, then the
/// UAVRELAY_WORKERS environment variable, then hardware concurrency.
int resolve_workers(std::optional<int> flag, std::optional<int> from_spec);

inline constexpr const char* kWorkersEnv = "UAVRELAY_WORKERS";
inline constexpr const char* kPresetDirEnv = "UAVRELAY_PRESET_DIR";

/// Runs the sweep. Per-point failures are recorded in SepPoint::errors.
SepCurve run_experiment(const ExperimentSpec& spec, int workers);

inline constexpr const char* kCsvHeader = "x,sep_closed,sep_bound,sep_asymp,sep_sim,sim_stderr,trials";

void emit_csv(const SepCurve& curve, std::ostream& out);
/// Throws std::runtime_error on I/O failure.
void write_csv(const SepCurve& curve, const std::filesystem::path& path);
/// Reads a file produced by write_csv. Throws std::runtime_error on malformed input.
SepCurve read_csv(const std::filesystem::path& path);

/// Directory holding the checked-in preset specs: $UAVRELAY_PRESET_DIR, then
/// the source tree, then the install prefix. Throws std::runtime_error if none exists.
std::filesystem::path preset_directory();
/// Spec files of a preset (fig2, fig3, fig4), sorted by name.
std::vector<std::filesystem::path> preset_files(std::string_view preset);

}  // namespace uavrelay

#endif  // UAVRELAY_EXPERIMENT_HPP
