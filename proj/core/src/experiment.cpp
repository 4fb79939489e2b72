// SPDX-License-Identifier: Apache-2.0

#include "uavrelay/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace uavrelay {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"experiment", {"name", "axis", "values", "outputs"}},
        {"system", {"M", "N_R", "m_g", "m_h", "sigma_dB", "K_dB"}},
        {"link",
         {"environment", "height_m", "carrier_hz", "pathloss_exponent", "ue_power_dBm", "uav_power_dBm",
          "noise_density_dBm_per_Hz", "bandwidth_hz"}},
        {"simulation", {"max_trials", "target_errors", "seed", "workers", "mgf_samples", "quad_order"}},
    };
    return keys;
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

std::optional<double> to_double(const std::string& text) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value)) return std::nullopt;
    return value;
}

// Integers may be written as 1000000 or 1e6.
std::optional<std::uint64_t> to_count(const std::string& text) {
    std::uint64_t value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec == std::errc{} && ptr == end) return value;
    const auto d = to_double(text);
    if (d && *d >= 0.0 && *d <= 9007199254740992.0 && std::floor(*d) == *d) return static_cast<std::uint64_t>(*d);
    return std::nullopt;
}

class Reader {
public:
    Reader(const pt::ptree& tree, std::string source) : tree_(tree), source_(std::move(source)) {}

    std::optional<std::string> text(const std::string& section, const std::string& key) const {
        const auto sec = tree_.get_child_optional(pt::ptree::path_type(section, '\0'));
        if (!sec) return std::nullopt;
        const auto value = sec->get_optional<std::string>(pt::ptree::path_type(key, '\0'));
        if (!value) return std::nullopt;
        return trim(*value);
    }

    std::optional<double> real(const std::string& section, const std::string& key) const {
        const auto t = text(section, key);
        if (!t) return std::nullopt;
        const auto v = to_double(*t);
        if (!v) fail(section, key, "expected a number, got '" + *t + "'");
        return v;
    }

    std::optional<std::uint64_t> count(const std::string& section, const std::string& key) const {
        const auto t = text(section, key);
        if (!t) return std::nullopt;
        const auto v = to_count(*t);
        if (!v) fail(section, key, "expected a non-negative integer, got '" + *t + "'");
        return v;
    }

    std::optional<int> integer(const std::string& section, const std::string& key) const {
        const auto t = text(section, key);
        if (!t) return std::nullopt;
        int value = 0;
        const auto* end = t->data() + t->size();
        const auto [ptr, ec] = std::from_chars(t->data(), end, value);
        if (ec != std::errc{} || ptr != end) fail(section, key, "expected an integer, got '" + *t + "'");
        return value;
    }

    [[noreturn]] void fail(const std::string& section, const std::string& key, const std::string& what) const {
        throw SpecParseError(source_ + ": [" + section + "] " + key + ": " + what);
    }

private:
    const pt::ptree& tree_;
    std::string source_;
};

std::vector<double> parse_values(const Reader& reader, const std::string& text) {
    std::vector<double> values;
    const auto range = split(text, ':');
    if (range.size() == 3) {
        const auto start = to_double(range[0]);
        const auto step = to_double(range[1]);
        const auto stop = to_double(range[2]);
        if (!start || !step || !stop || !(*step > 0.0)) {
            reader.fail("experiment", "values", "range must be start:step:stop with a positive step");
        }
        const double slack = 1e-9 * *step;
        for (long i = 0;; ++i) {
            const double v = *start + static_cast<double>(i) * *step;
            if (v > *stop + slack) break;
            values.push_back(v);
            if (i > 1000000) reader.fail("experiment", "values", "range has too many points");
        }
        return values;
    }
    if (range.size() != 1) reader.fail("experiment", "values", "expected start:step:stop or a comma-separated list");
    for (const auto& item : split(text, ',')) {
        const auto v = to_double(item);
        if (!v) reader.fail("experiment", "values", "bad number '" + item + "'");
        values.push_back(*v);
    }
    return values;
}

std::optional<Output> parse_output(const std::string& name) {
    if (name == "closed_form") return Output::ClosedForm;
    if (name == "union_bound") return Output::UnionBound;
    if (name == "asymptotic") return Output::Asymptotic;
    if (name == "simulation") return Output::Simulation;
    return std::nullopt;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    // splitmix64 finalizer
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

}  // namespace

SpecValidationError::SpecValidationError(std::vector<std::string> problems)
    : std::runtime_error([&] {
          std::string msg = "invalid experiment spec:";
          for (const auto& p : problems) msg += "\n  - " + p;
          return msg;
      }()),
      problems_(std::move(problems)) {}

std::string_view to_string(SweepAxis axis) { return axis == SweepAxis::SnrDb ? "snr_db" : "distance_m"; }

std::string_view to_string(Output output) {
    switch (output) {
        case Output::ClosedForm: return "closed_form";
        case Output::UnionBound: return "union_bound";
        case Output::Asymptotic: return "asymptotic";
        case Output::Simulation: return "simulation";
    }
    return "unknown";
}

bool ExperimentSpec::wants(Output output) const {
    return std::find(outputs.begin(), outputs.end(), output) != outputs.end();
}

std::pair<double, double> ExperimentSpec::omegas_at(double x) const {
    if (axis == SweepAxis::SnrDb) {
        const double omega = db_to_linear(x);
        return {omega, omega};
    }
    const LinkGeometry geom{uav_height_m, x / 2.0, carrier_hz, pathloss_exponent};
    const double loss = path_loss_linear(environment_profile(environment), geom);
    const double noise = noise_power_dBm(noise_density_dBm_per_hz, bandwidth_hz);
    return {link_snr_linear({ue_power_dBm, noise, loss}), link_snr_linear({uav_power_dBm, noise, loss})};
}

SystemConfig ExperimentSpec::system_at(double x) const {
    SystemConfig config;
    config.M = M;
    config.N_pat = M;
    config.N_R = N_R;
    config.hop1 = channel;
    config.hop2 = channel;
    std::tie(config.omega1, config.omega2) = omegas_at(x);
    return config;
}

ExperimentSpec parse_spec(std::string_view text, const std::string& source) {
    pt::ptree tree;
    {
        std::istringstream in{std::string(text)};
        try {
            pt::ini_parser::read_ini(in, tree);
        } catch (const pt::ini_parser_error& e) {
            throw SpecParseError(source + ":" + std::to_string(e.line()) + ": " + e.message());
        }
    }

    std::vector<std::string> problems;
    for (const auto& [section, body] : tree) {
        const auto it = known_keys().find(section);
        if (it == known_keys().end()) {
            if (!body.data().empty()) {
                problems.push_back("key '" + section + "' appears outside any section");
            } else {
                problems.push_back("unknown section [" + section + "]");
            }
            continue;
        }
        for (const auto& [key, value] : body) {
            if (!it->second.count(key)) problems.push_back("unknown key '" + key + "' in [" + section + "]");
        }
    }

    const Reader r(tree, source);
    ExperimentSpec spec;
    spec.name = r.text("experiment", "name").value_or("experiment");

    if (const auto axis = r.text("experiment", "axis")) {
        if (*axis == "snr_db") {
            spec.axis = SweepAxis::SnrDb;
        } else if (*axis == "distance_m") {
            spec.axis = SweepAxis::DistanceM;
        } else {
            problems.push_back("[experiment] axis must be snr_db or distance_m, got '" + *axis + "'");
        }
    } else {
        problems.push_back("[experiment] axis is required");
    }

    if (const auto values = r.text("experiment", "values")) {
        spec.values = parse_values(r, *values);
        if (spec.values.empty()) problems.push_back("[experiment] values must not be empty");
        for (std::size_t i = 1; i < spec.values.size(); ++i) {
            if (!(spec.values[i] > spec.values[i - 1])) {
                problems.push_back("[experiment] values must be strictly increasing");
                break;
            }
        }
        if (spec.axis == SweepAxis::DistanceM &&
            std::any_of(spec.values.begin(), spec.values.end(), [](double v) { return v < 0.0; })) {
            problems.push_back("[experiment] distances must be >= 0");
        }
    } else {
        problems.push_back("[experiment] values is required");
    }

    if (const auto outputs = r.text("experiment", "outputs")) {
        for (const auto& item : split(*outputs, ',')) {
            const auto out = parse_output(item);
            if (!out) {
                problems.push_back("[experiment] unknown output '" + item + "'");
            } else if (spec.wants(*out)) {
                problems.push_back("[experiment] output '" + item + "' listed twice");
            } else {
                spec.outputs.push_back(*out);
            }
        }
    } else {
        problems.push_back("[experiment] outputs is required");
    }

    if (const auto m = r.integer("system", "M")) {
        spec.M = *m;
        if (spec.M != 2 && spec.M != 4 && spec.M != 16 && spec.M != 64) {
            problems.push_back("[system] M must be one of 2, 4, 16, 64");
        }
    } else {
        problems.push_back("[system] M is required");
    }
    if (const auto nr = r.integer("system", "N_R")) {
        spec.N_R = *nr;
        if (spec.N_R < 1) problems.push_back("[system] N_R must be >= 1");
    } else {
        problems.push_back("[system] N_R is required");
    }

    const auto m_g = r.integer("system", "m_g");
    spec.sigma_dB = r.real("system", "sigma_dB");
    if (m_g && spec.sigma_dB) {
        problems.push_back("[system] m_g and sigma_dB are mutually exclusive");
    } else if (spec.sigma_dB) {
        if (*spec.sigma_dB > 0.0) {
            spec.channel.m_g = lognormal_to_nakagami(*spec.sigma_dB);
        } else {
            problems.push_back("[system] sigma_dB must be positive");
        }
    } else if (m_g) {
        spec.channel.m_g = *m_g;
        if (*m_g < 1) problems.push_back("[system] m_g must be >= 1");
    } else {
        problems.push_back("[system] one of m_g or sigma_dB is required");
    }

    const auto m_h = r.integer("system", "m_h");
    spec.k_dB = r.real("system", "K_dB");
    if (m_h && spec.k_dB) {
        problems.push_back("[system] m_h and K_dB are mutually exclusive");
    } else if (spec.k_dB) {
        spec.channel.m_h = rician_k_to_nakagami(*spec.k_dB);
    } else if (m_h) {
        spec.channel.m_h = *m_h;
        if (*m_h < 1) problems.push_back("[system] m_h must be >= 1");
    } else {
        problems.push_back("[system] one of m_h or K_dB is required");
    }

    if (const auto env = r.text("link", "environment")) {
        if (const auto parsed = parse_environment(*env)) {
            spec.environment = *parsed;
        } else {
            problems.push_back("[link] unknown environment '" + *env + "'");
        }
    }
    spec.uav_height_m = r.real("link", "height_m").value_or(spec.uav_height_m);
    spec.carrier_hz = r.real("link", "carrier_hz").value_or(spec.carrier_hz);
    spec.pathloss_exponent = r.real("link", "pathloss_exponent").value_or(spec.pathloss_exponent);
    spec.ue_power_dBm = r.real("link", "ue_power_dBm").value_or(spec.ue_power_dBm);
    spec.uav_power_dBm = r.real("link", "uav_power_dBm").value_or(spec.uav_power_dBm);
    spec.noise_density_dBm_per_hz = r.real("link", "noise_density_dBm_per_Hz").value_or(spec.noise_density_dBm_per_hz);
    spec.bandwidth_hz = r.real("link", "bandwidth_hz").value_or(spec.bandwidth_hz);
    if (!(spec.uav_height_m > 0.0)) problems.push_back("[link] height_m must be > 0");
    if (!(spec.carrier_hz > 0.0)) problems.push_back("[link] carrier_hz must be > 0");
    if (!(spec.pathloss_exponent >= 2.0)) problems.push_back("[link] pathloss_exponent must be >= 2");
    if (!(spec.bandwidth_hz > 0.0)) problems.push_back("[link] bandwidth_hz must be > 0");

    auto& sim = spec.simulation;
    sim.max_trials = r.count("simulation", "max_trials").value_or(sim.max_trials);
    sim.target_errors = r.count("simulation", "target_errors").value_or(sim.target_errors);
    sim.seed = r.count("simulation", "seed").value_or(sim.seed);
    sim.mgf_samples = r.count("simulation", "mgf_samples").value_or(sim.mgf_samples);
    sim.quad_order = r.integer("simulation", "quad_order").value_or(sim.quad_order);
    sim.workers = r.integer("simulation", "workers");
    if (spec.wants(Output::Simulation) && sim.max_trials < 10000) {
        problems.push_back("[simulation] max_trials must be >= 10000");
    }
    if (sim.workers && *sim.workers < 1) problems.push_back("[simulation] workers must be >= 1");
    if (sim.mgf_samples < 10000) problems.push_back("[simulation] mgf_samples must be >= 10000");
    if (sim.quad_order < 2) problems.push_back("[simulation] quad_order must be >= 2");

    if (!problems.empty()) throw SpecValidationError(std::move(problems));
    return spec;
}

ExperimentSpec load_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SpecParseError(path.string() + ": cannot open file");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_spec(text.str(), path.string());
}

bool SepCurve::complete() const {
    for (const auto& p : points) {
        if (!p.errors.empty()) return false;
        for (Output o : outputs) {
            const bool present = (o == Output::ClosedForm && p.sep_closed) || (o == Output::UnionBound && p.sep_bound) ||
                                 (o == Output::Asymptotic && p.sep_asymp) || (o == Output::Simulation && p.sep_sim);
            if (!present) return false;
        }
    }
    return true;
}

int resolve_workers(std::optional<int> flag, std::optional<int> from_spec) {
    if (flag) {
        if (*flag < 1) throw std::invalid_argument("workers must be >= 1");
        return *flag;
    }
    if (from_spec) return *from_spec;
    if (const char* env = std::getenv(kWorkersEnv); env && *env) {
        int value = 0;
        const std::string text = trim(env);
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc{} || ptr != text.data() + text.size() || value < 1) {
            throw std::invalid_argument(std::string(kWorkersEnv) + " must be a positive integer");
        }
        return value;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

SepCurve run_experiment(const ExperimentSpec& spec, int workers) {
    SepCurve curve;
    curve.name = spec.name;
    curve.outputs = spec.outputs;
    if (spec.axis == SweepAxis::SnrDb) {
        curve.axis_label = "P_T/(L_P N_0) per link";
        curve.axis_units = "dB";
    } else {
        curve.axis_label = "total ground distance d1+d2";
        curve.axis_units = "m";
    }

    std::optional<MgfEstimator> mgf;
    std::string mgf_error;
    if (spec.wants(Output::UnionBound)) {
        try {
            mgf.emplace(spec.channel, spec.simulation.mgf_samples, spec.simulation.seed);
        } catch (const std::exception& e) {
            mgf_error = e.what();
        }
    }

    for (std::size_t i = 0; i < spec.values.size(); ++i) {
        SepPoint point;
        point.x = spec.values[i];
        SystemConfig config;
        try {
            config = spec.system_at(point.x);
            point.omega1 = config.omega1;
            point.omega2 = config.omega2;
        } catch (const std::exception& e) {
            point.errors.push_back(std::string("geometry: ") + e.what());
            curve.points.push_back(std::move(point));
            continue;
        }
        auto attempt = [&](const char* what, auto&& fn) {
            try {
                fn();
            } catch (const std::exception& e) {
                point.errors.push_back(std::string(what) + ": " + e.what());
            }
        };
        if (spec.wants(Output::ClosedForm)) attempt("closed_form", [&] { point.sep_closed = hop1_sep_closed(config); });
        if (spec.wants(Output::UnionBound)) {
            attempt("union_bound", [&] {
                if (!mgf) throw std::runtime_error(mgf_error);
                point.sep_bound = hop2_sep_bound(config, *mgf, spec.simulation.quad_order);
            });
        }
        if (spec.wants(Output::Asymptotic)) attempt("asymptotic", [&] { point.sep_asymp = hop2_sep_asymptotic(config); });
        if (spec.wants(Output::Simulation)) {
            attempt("simulation", [&] {
                const auto result = run_e2e(config, spec.simulation.max_trials, spec.simulation.target_errors,
                                            mix_seed(spec.simulation.seed, i), workers);
                point.sep_sim = result.e2e.sep;
                point.sim_stderr = result.e2e.std_error;
                point.trials = result.e2e.trials;
                point.hop1_sim = result.hop1;
                point.hop2_sim = result.hop2;
            });
        }
        curve.points.push_back(std::move(point));
    }
    return curve;
}

void emit_csv(const SepCurve& curve, std::ostream& out) {
    auto field = [](const std::optional<double>& v, bool clamp) {
        if (!v) return std::string();
        return format_value(clamp ? std::min(*v, 1.0) : *v);
    };
    out << kCsvHeader << '\n';
    for (const auto& p : curve.points) {
        out << format_value(p.x) << ',' << field(p.sep_closed, true) << ',' << field(p.sep_bound, true) << ','
            << field(p.sep_asymp, true) << ',' << field(p.sep_sim, true) << ',' << field(p.sim_stderr, false) << ','
            << (p.trials ? std::to_string(*p.trials) : std::string()) << '\n';
    }
}

void write_csv(const SepCurve& curve, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    emit_csv(curve, out);
    out.flush();
    if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

SepCurve read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || trim(line) != kCsvHeader) {
        throw std::runtime_error(path.string() + ": missing or unexpected header");
    }
    SepCurve curve;
    curve.name = path.stem().string();
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split(line, ',');
        auto bad = [&](const std::string& what) {
            return std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": " + what);
        };
        if (fields.size() != 7) throw bad("expected 7 fields");
        auto opt = [&](const std::string& f) -> std::optional<double> {
            if (f.empty()) return std::nullopt;
            const auto v = to_double(f);
            if (!v) throw bad("bad number '" + f + "'");
            return v;
        };
        SepPoint p;
        const auto x = opt(fields[0]);
        if (!x) throw bad("missing x");
        p.x = *x;
        p.sep_closed = opt(fields[1]);
        p.sep_bound = opt(fields[2]);
        p.sep_asymp = opt(fields[3]);
        p.sep_sim = opt(fields[4]);
        p.sim_stderr = opt(fields[5]);
        if (!fields[6].empty()) {
            const auto n = to_count(fields[6]);
            if (!n) throw bad("bad trial count '" + fields[6] + "'");
            p.trials = n;
        }
        curve.points.push_back(std::move(p));
    }
    return curve;
}

std::filesystem::path preset_directory() {
    namespace fs = std::filesystem;
    std::vector<fs::path> candidates;
    if (const char* env = std::getenv(kPresetDirEnv); env && *env) candidates.emplace_back(env);
    candidates.emplace_back(UAVRELAY_SOURCE_PRESET_DIR);
    candidates.emplace_back(UAVRELAY_INSTALL_PRESET_DIR);
    for (const auto& dir : candidates) {
        std::error_code ec;
        if (fs::is_directory(dir, ec)) return dir;
    }
    throw std::runtime_error("no preset directory found; set " + std::string(kPresetDirEnv));
}

std::vector<std::filesystem::path> preset_files(std::string_view preset) {
    if (preset != "fig2" && preset != "fig3" && preset != "fig4") {
        throw std::invalid_argument("unknown preset '" + std::string(preset) + "' (expected fig2, fig3 or fig4)");
    }
    const std::string prefix = std::string(preset) + "_";
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(preset_directory())) {
        const auto name = entry.path().filename().string();
        if (entry.is_regular_file() && name.rfind(prefix, 0) == 0 && entry.path().extension() == ".cfg") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw std::runtime_error("preset '" + std::string(preset) + "' has no spec files");
    return files;
}

}  // namespace uavrelay
