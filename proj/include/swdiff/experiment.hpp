#pragma once

// Experiment harness: config schema, shipped presets, the run/map/compare/
// report operations behind the CLI, and CSV/SVG emission. Every output file
// embeds the resolved configuration as '#' (CSV) or '<!-- -->' (SVG) header
// lines; the output directory itself is not part of that header so re-running
// a preset into a different directory yields byte-identical files.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "baselines.hpp"
#include "config.hpp"
#include "error_map.hpp"
#include "integrators.hpp"
#include "metrics.hpp"
#include "signals.hpp"
#include "svg_plot.hpp"
#include "switching_differentiator.hpp"
#include "trajectory.hpp"

namespace swdiff {

inline constexpr const char* kOutputDirEnvVar = "SWDIFF_OUTPUT_DIR";

// ---------------------------------------------------------------------------
// Signal spec parsing: "sine 2 1, cosine 3 3" = comma-separated
// "<kind> <amplitude> <omega>" terms.

inline TestSignal parse_signal_spec(const std::string& spec, const std::string& field) {
    std::vector<SignalTerm> terms;
    std::stringstream ss(spec);
    std::string part;
    while (std::getline(ss, part, ',')) {
        std::stringstream ws(part);
        std::string kind;
        double amp = 0.0, omega = 0.0;
        if (!(ws >> kind >> amp >> omega))
            throw ConfigError("field '" + field + "': expected '<sine|cosine> <amplitude> <omega>', got '" +
                              detail::trim(part) + "'");
        std::string extra;
        if (ws >> extra)
            throw ConfigError("field '" + field + "': trailing token '" + extra + "' in term '" +
                              detail::trim(part) + "'");
        PhaseKind pk;
        if (kind == "sine" || kind == "sin")
            pk = PhaseKind::Sine;
        else if (kind == "cosine" || kind == "cos")
            pk = PhaseKind::Cosine;
        else
            throw ConfigError("field '" + field + "': unknown term kind '" + kind + "'");
        terms.push_back({amp, omega, pk});
    }
    if (terms.empty()) throw ConfigError("field '" + field + "': no terms");
    return TestSignal{terms, spec};
}

inline std::string serialize_signal(const TestSignal& sig) {
    std::string out;
    for (std::size_t i = 0; i < sig.terms.size(); ++i) {
        if (i) out += ", ";
        out += sig.terms[i].kind == PhaseKind::Sine ? "sine " : "cosine ";
        out += format_double(sig.terms[i].amplitude) + " " + format_double(sig.terms[i].omega);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Experiment configuration.

enum class ExperimentMethod { SdCascade, Hgo, Hosm };

inline const char* method_name(ExperimentMethod m) {
    switch (m) {
        case ExperimentMethod::SdCascade: return "sd-cascade";
        case ExperimentMethod::Hgo: return "hgo";
        case ExperimentMethod::Hosm: return "hosm";
    }
    return "?";
}

struct ExperimentConfig {
    std::string name;
    ExperimentMethod method = ExperimentMethod::SdCascade;
    TestSignal signal = paper_signal();
    SdCascadeParams sd;    // method == SdCascade
    HgoConfig hgo;         // method == Hgo
    HosmConfig hosm;       // method == Hosm
    SimPlan plan;
    StepMethod step_method = StepMethod::Rk4;
    NoiseSpec noise;
    std::vector<double> init;  // empty = zeros
    double band_fraction = 0.02;
    double steady_from = 0.0, steady_to = 0.0;
    std::string output_dir;

    // Number of derivative orders the method estimates.
    std::size_t orders() const {
        return method == ExperimentMethod::SdCascade ? sd.stages.size() : 4;
    }

    int dimension() const {
        return method == ExperimentMethod::SdCascade ? static_cast<int>(2 * sd.stages.size()) : 5;
    }

    std::string estimate_column(std::size_t order) const {
        switch (method) {
            case ExperimentMethod::SdCascade: return "sd.sigma" + std::to_string(order);
            case ExperimentMethod::Hgo: return "hgo.z" + std::to_string(order);
            case ExperimentMethod::Hosm: return "hosm.z" + std::to_string(order);
        }
        return {};
    }

    static ExperimentConfig from_config(const Config& cfg);

    // Full resolved configuration (defaults applied), excluding the output
    // location. This is the header every derived file embeds.
    std::vector<std::pair<std::string, std::string>> resolved_header() const;
};

inline SwitchSpec parse_switch_spec(const Config& cfg, const std::string& prefix,
                                    const std::string& dflt) {
    SwitchSpec sw;
    const std::string kind = cfg.get_string(prefix + ".switch", dflt);
    if (kind == "sgn")
        sw.kind = SwitchKind::ExactSgn;
    else if (kind == "sat")
        sw.kind = SwitchKind::Sat;
    else
        throw ConfigError("field '" + prefix + ".switch': expected 'sgn' or 'sat', got '" + kind + "'");
    sw.epsilon = cfg.get_double(prefix + ".epsilon", 1e-4);
    return sw;
}

inline ExperimentConfig ExperimentConfig::from_config(const Config& cfg) {
    ExperimentConfig ec;
    ec.name = cfg.get_string("name");
    const std::string m = cfg.get_string("method");
    if (m == "sd-cascade")
        ec.method = ExperimentMethod::SdCascade;
    else if (m == "hgo")
        ec.method = ExperimentMethod::Hgo;
    else if (m == "hosm")
        ec.method = ExperimentMethod::Hosm;
    else
        throw ConfigError("field 'method': expected sd-cascade, hgo, or hosm; got '" + m + "'");

    ec.signal = parse_signal_spec(cfg.get_string("signal"), "signal");

    if (ec.method == ExperimentMethod::SdCascade) {
        const std::uint64_t stages = cfg.get_u64("sd.stages", 4);
        if (stages < 1) throw ConfigError("field 'sd.stages': must be >= 1");
        SdParams base;
        base.k = cfg.get_double("sd.k");
        base.L = cfg.get_double("sd.L");
        base.switch_spec = parse_switch_spec(cfg, "sd", "sat");
        ec.sd = SdCascadeParams::shared(base, stages);
        for (std::uint64_t i = 1; i <= stages; ++i) {
            const std::string suffix = "." + std::to_string(i);
            auto& st = ec.sd.stages[i - 1];
            st.k = cfg.get_double("sd.k" + suffix, st.k);
            st.L = cfg.get_double("sd.L" + suffix, st.L);
            st.switch_spec.epsilon = cfg.get_double("sd.epsilon" + suffix, st.switch_spec.epsilon);
        }
        ec.sd.validate();
    } else if (ec.method == ExperimentMethod::Hgo) {
        const std::vector<double> c = cfg.get_double_list("hgo.c");
        if (c.size() != 5) throw ConfigError("field 'hgo.c': expected exactly 5 gains");
        for (std::size_t i = 0; i < 5; ++i) ec.hgo.c[i] = c[i];
        ec.hgo.epsilon = cfg.get_double("hgo.epsilon");
        ec.hgo.validate();
    } else {
        ec.hosm.L = cfg.get_double("hosm.L");
        ec.hosm.final_switch = parse_switch_spec(cfg, "hosm", "sgn");
        ec.hosm.validate();
    }

    ec.plan.t_start = cfg.get_double("plan.t_start", 0.0);
    ec.plan.t_end = cfg.get_double("plan.t_end");
    ec.plan.dt = cfg.get_double("plan.dt");
    ec.plan.record_stride = cfg.get_u64("plan.record_stride", 100);
    ec.plan.validate();
    ec.step_method = parse_step_method(cfg.get_string("plan.method", "rk4"));

    const std::string nk = cfg.get_string("noise.kind", "none");
    if (nk == "none")
        ec.noise.kind = NoiseKind::None;
    else if (nk == "uniform")
        ec.noise.kind = NoiseKind::Uniform;
    else if (nk == "gaussian")
        ec.noise.kind = NoiseKind::Gaussian;
    else
        throw ConfigError("field 'noise.kind': expected none, uniform, or gaussian; got '" + nk + "'");
    ec.noise.magnitude = cfg.get_double("noise.magnitude", 0.0);
    ec.noise.seed = cfg.get_u64("noise.seed", 0);
    if (ec.noise.magnitude < 0.0) throw ConfigError("field 'noise.magnitude': must be >= 0");

    if (cfg.has("init")) {
        ec.init = cfg.get_double_list("init");
        if (static_cast<int>(ec.init.size()) != ec.dimension())
            throw ConfigError("field 'init': expected " + std::to_string(ec.dimension()) +
                              " values for method " + m);
    }

    ec.band_fraction = cfg.get_double("metrics.band_fraction", 0.02);
    if (!(ec.band_fraction > 0.0 && ec.band_fraction < 1.0))
        throw ConfigError("field 'metrics.band_fraction': must be in (0, 1)");
    ec.steady_from = cfg.get_double("metrics.steady_from", 0.5 * (ec.plan.t_start + ec.plan.t_end));
    ec.steady_to = cfg.get_double("metrics.steady_to", ec.plan.t_end);
    if (!(ec.steady_from < ec.steady_to))
        throw ConfigError("field 'metrics.steady_from': steady window must be nonempty");

    ec.output_dir = cfg.get_string("output", "out/" + ec.name);
    cfg.reject_unconsumed();
    return ec;
}

inline std::vector<std::pair<std::string, std::string>> ExperimentConfig::resolved_header() const {
    std::vector<std::pair<std::string, std::string>> h;
    auto add = [&h](const std::string& k, const std::string& v) { h.emplace_back(k, v); };
    auto addd = [&](const std::string& k, double v) { add(k, format_double(v)); };
    add("name", name);
    add("method", method_name(method));
    add("signal", serialize_signal(signal));
    if (method == ExperimentMethod::SdCascade) {
        add("sd.stages", std::to_string(sd.stages.size()));
        for (std::size_t i = 0; i < sd.stages.size(); ++i) {
            const std::string sfx = "." + std::to_string(i + 1);
            addd("sd.k" + sfx, sd.stages[i].k);
            addd("sd.L" + sfx, sd.stages[i].L);
            add("sd.switch" + sfx, sd.stages[i].switch_spec.kind == SwitchKind::Sat ? "sat" : "sgn");
            if (sd.stages[i].switch_spec.kind == SwitchKind::Sat)
                addd("sd.epsilon" + sfx, sd.stages[i].switch_spec.epsilon);
        }
    } else if (method == ExperimentMethod::Hgo) {
        std::string cs;
        for (std::size_t i = 0; i < 5; ++i) cs += (i ? " " : "") + format_double(hgo.c[i]);
        add("hgo.c", cs);
        addd("hgo.epsilon", hgo.epsilon);
    } else {
        addd("hosm.L", hosm.L);
        add("hosm.switch", hosm.final_switch.kind == SwitchKind::Sat ? "sat" : "sgn");
        if (hosm.final_switch.kind == SwitchKind::Sat) addd("hosm.epsilon", hosm.final_switch.epsilon);
    }
    if (!init.empty()) {
        std::string is;
        for (std::size_t i = 0; i < init.size(); ++i) is += (i ? " " : "") + format_double(init[i]);
        add("init", is);
    }
    addd("plan.t_start", plan.t_start);
    addd("plan.t_end", plan.t_end);
    addd("plan.dt", plan.dt);
    add("plan.record_stride", std::to_string(plan.record_stride));
    add("plan.method", step_method_name(step_method));
    add("noise.kind", noise.kind == NoiseKind::None
                          ? "none"
                          : (noise.kind == NoiseKind::Uniform ? "uniform" : "gaussian"));
    if (noise.kind != NoiseKind::None) {
        addd("noise.magnitude", noise.magnitude);
        add("noise.seed", std::to_string(noise.seed));
    }
    addd("metrics.band_fraction", band_fraction);
    addd("metrics.steady_from", steady_from);
    addd("metrics.steady_to", steady_to);
    return h;
}

// ---------------------------------------------------------------------------
// Shipped presets. The same text lives in presets/*.cfg; a test pins the two
// copies to be identical so the files never drift from the built-in fallback.

namespace presets {

inline constexpr const char* sd_paper_1 = R"(# Switching-differentiator cascade, first parameter set.
# Four stages with shared gains estimate the first four derivatives of
# a(t) = 2 sin t + 3 cos 3t from zero initial states.
name = sd-paper-1
method = sd-cascade
signal = sine 2 1, cosine 3 3
sd.stages = 4
sd.k = 3000
sd.L = 3000
sd.switch = sat
sd.epsilon = 1e-4
plan.t_start = 0
plan.t_end = 2
plan.dt = 1e-6
plan.record_stride = 100
plan.method = rk4
metrics.band_fraction = 0.02
metrics.steady_from = 0.5
metrics.steady_to = 2
output = out/sd-paper-1
)";

inline constexpr const char* sd_paper_2 = R"(# Switching-differentiator cascade, second parameter set: gains raised to
# k = 5000, L = 10000 to push the transient shorter. Everything else (signal,
# sat layer width, step size, horizon) matches sd-paper-1.
name = sd-paper-2
method = sd-cascade
signal = sine 2 1, cosine 3 3
sd.stages = 4
sd.k = 5000
sd.L = 10000
sd.switch = sat
sd.epsilon = 1e-4
plan.t_start = 0
plan.t_end = 2
plan.dt = 1e-6
plan.record_stride = 100
plan.method = rk4
metrics.band_fraction = 0.02
metrics.steady_from = 0.5
metrics.steady_to = 2
output = out/sd-paper-2
)";

inline constexpr const char* hgo_paper = R"(# High-gain observer with the published gains; linear and fast but exhibits
# enormous transient peaking from zero initial states.
name = hgo-paper
method = hgo
signal = sine 2 1, cosine 3 3
hgo.c = 47.5 902.5 8573.75 40725.3125 77378.09375
hgo.epsilon = 0.03
plan.t_start = 0
plan.t_end = 2
plan.dt = 1e-6
plan.record_stride = 100
plan.method = rk4
metrics.band_fraction = 0.02
metrics.steady_from = 0.5
metrics.steady_to = 2
output = out/hgo-paper
)";

inline constexpr const char* hosm_paper = R"(# HOSM differentiator with the exact-sgn final stage. Forward Euler on
# purpose: the discontinuous right-hand side gains nothing from RK4, whose
# four intra-step sgn evaluations cancel each other and mask the switching
# behavior the experiment exists to show. dt = 1e-7 because the final stage
# slews at 1.1 * L = 3.3e7 per second; the horizon is halved to bound runtime.
# record_stride is odd on purpose: post-settling, z4 switches in a period-2
# limit cycle at the step scale, which any even stride would alias away.
name = hosm-paper
method = hosm
signal = sine 2 1, cosine 3 3
hosm.L = 3e7
hosm.switch = sgn
plan.t_start = 0
plan.t_end = 0.5
plan.dt = 1e-7
plan.record_stride = 25
plan.method = euler
metrics.band_fraction = 0.02
metrics.steady_from = 0.25
metrics.steady_to = 0.5
output = out/hosm-paper
)";

inline const std::vector<std::pair<std::string, const char*>>& all() {
    static const std::vector<std::pair<std::string, const char*>> v = {
        {"sd-paper-1", sd_paper_1},
        {"sd-paper-2", sd_paper_2},
        {"hgo-paper", hgo_paper},
        {"hosm-paper", hosm_paper},
    };
    return v;
}

}  // namespace presets

// Resolve a CLI argument to a config: an existing file path wins, otherwise
// the name must match a shipped preset.
inline ExperimentConfig load_experiment_config(const std::string& path_or_preset) {
    if (std::filesystem::exists(path_or_preset))
        return ExperimentConfig::from_config(Config::parse_file(path_or_preset));
    for (const auto& [name, text] : presets::all())
        if (name == path_or_preset)
            return ExperimentConfig::from_config(Config::parse_text(text, "preset " + name));
    std::string known;
    for (const auto& [name, text] : presets::all()) known += (known.empty() ? "" : ", ") + name;
    throw ConfigError("'" + path_or_preset + "' is neither a config file nor a preset (presets: " +
                      known + ")");
}

// ---------------------------------------------------------------------------
// run_experiment

struct MetricRow {
    std::string differentiator;
    std::size_t order = 0;
    std::string est_column;
    MetricReport report;
};

struct RunOutputs {
    Trajectory trajectory;
    std::vector<MetricRow> rows;
    std::filesystem::path trajectory_csv;
    std::filesystem::path metrics_csv;
    std::vector<std::filesystem::path> plots;
};

namespace detail {

inline std::filesystem::path effective_output_dir(const ExperimentConfig& cfg) {
    if (const char* env = std::getenv(kOutputDirEnvVar); env != nullptr && *env != '\0')
        return std::filesystem::path(env) / cfg.name;
    return std::filesystem::path(cfg.output_dir);
}

inline OdeSystem build_system(const ExperimentConfig& cfg, std::function<double(double)> noise_fn) {
    switch (cfg.method) {
        case ExperimentMethod::SdCascade: return build_sd_system(cfg.signal, cfg.sd, std::move(noise_fn));
        case ExperimentMethod::Hgo: return build_baseline_system(cfg.signal, cfg.hgo, std::move(noise_fn));
        case ExperimentMethod::Hosm:
            return build_baseline_system(cfg.signal, cfg.hosm, std::move(noise_fn));
    }
    throw std::logic_error("unreachable");
}

// Measurement noise as a zero-order hold over integration steps: one draw per
// step, constant across the RK4 substep evaluations of that step.
inline std::function<double(double)> make_noise_fn(const ExperimentConfig& cfg) {
    if (cfg.noise.kind == NoiseKind::None) return {};
    const std::uint64_t n = cfg.plan.n_steps();
    auto values = std::make_shared<std::vector<double>>();
    values->reserve(n + 1);
    NoiseGenerator gen(cfg.noise);
    for (std::uint64_t j = 0; j <= n; ++j) values->push_back(gen.next());
    const double t0 = cfg.plan.t_start, dt = cfg.plan.dt;
    return [values, t0, dt, n](double t) {
        double idx = std::floor((t - t0) / dt + 1e-9);
        if (idx < 0.0) idx = 0.0;
        std::uint64_t j = static_cast<std::uint64_t>(idx);
        if (j > n) j = n;
        return (*values)[j];
    };
}

}  // namespace detail

inline MetricRow compute_metric_row(const ExperimentConfig& cfg, const Trajectory& traj,
                                    std::size_t order) {
    MetricRow row;
    row.differentiator = method_name(cfg.method);
    row.order = order;
    row.est_column = cfg.estimate_column(order);
    row.report = compute_metrics(traj, row.est_column, "true.d" + std::to_string(order),
                                 cfg.band_fraction, cfg.steady_from, cfg.steady_to);
    return row;
}

inline void write_metrics_csv(const std::filesystem::path& path,
                              const std::vector<std::pair<std::string, std::string>>& header,
                              const std::vector<MetricRow>& rows, std::uint64_t record_stride,
                              bool preset_column = false) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    for (const auto& [k, v] : header) out << "# " << k << " = " << v << "\n";
    out << (preset_column ? "preset," : "")
        << "differentiator,order,estimate_column,settling_time,peak_abs,peak_time,"
           "chattering_index,rms_error,steady_from,steady_to,band_fraction,record_stride\n";
    for (const auto& row : rows) {
        if (preset_column) {
            const auto slash = row.differentiator.find('/');
            out << row.differentiator.substr(0, slash) << ","
                << row.differentiator.substr(slash + 1) << ",";
        } else {
            out << row.differentiator << ",";
        }
        const auto& r = row.report;
        out << row.order << "," << row.est_column << ","
            << (r.settling_time ? format_double(*r.settling_time) : "none") << ","
            << format_double(r.peak_abs) << "," << format_double(r.peak_time) << ","
            << format_double(r.chattering_index) << "," << format_double(r.rms_error) << ","
            << format_double(r.steady_from) << "," << format_double(r.steady_to) << ","
            << format_double(r.band_fraction) << "," << record_stride << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

// Simulate one experiment; optionally write trajectory/metrics/plot files
// into its effective output directory.
inline RunOutputs run_experiment(const ExperimentConfig& cfg, bool write_files = true) {
    const OdeSystem sys = detail::build_system(cfg, detail::make_noise_fn(cfg));

    std::vector<RecordColumn> recorder;
    const TestSignal sig = cfg.signal;
    for (std::size_t order = 1; order <= cfg.orders(); ++order) {
        RecordColumn col;
        col.name = "true.d" + std::to_string(order);
        col.time_fn = [sig, order](double t) {
            return eval_signal(sig, t, static_cast<unsigned>(order));
        };
        recorder.push_back(std::move(col));
    }
    for (std::size_t order = 1; order <= cfg.orders(); ++order) {
        RecordColumn col;
        col.name = cfg.estimate_column(order);
        col.state_index = cfg.method == ExperimentMethod::SdCascade
                              ? static_cast<int>(2 * (order - 1) + 1)
                              : static_cast<int>(order);
        recorder.push_back(std::move(col));
    }

    std::vector<double> x0 = cfg.init;
    if (x0.empty()) x0.assign(static_cast<std::size_t>(cfg.dimension()), 0.0);

    RunOutputs out;
    out.trajectory = simulate(sys, x0, cfg.plan, cfg.step_method, recorder);
    for (std::size_t order = 1; order <= cfg.orders(); ++order)
        out.rows.push_back(compute_metric_row(cfg, out.trajectory, order));

    if (write_files) {
        const std::filesystem::path dir = detail::effective_output_dir(cfg);
        std::filesystem::create_directories(dir);
        const auto header = cfg.resolved_header();

        out.trajectory_csv = dir / "trajectory.csv";
        write_trajectory_csv(out.trajectory, out.trajectory_csv.string(), header);

        out.metrics_csv = dir / "metrics.csv";
        write_metrics_csv(out.metrics_csv, header, out.rows, cfg.plan.record_stride);

        for (std::size_t order = 1; order <= cfg.orders(); ++order) {
            const std::string truth = "true.d" + std::to_string(order);
            const std::string est = cfg.estimate_column(order);
            const std::filesystem::path p = dir / ("order" + std::to_string(order) + ".svg");
            std::vector<PlotSeries> series = {
                {truth, &out.trajectory.times, &out.trajectory.column(truth)},
                {est, &out.trajectory.times, &out.trajectory.column(est)},
            };
            write_svg_plot(p.string(), cfg.name + ": derivative order " + std::to_string(order),
                           "t [s]", "value", series, header);
            out.plots.push_back(p);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// run_map_analysis

struct MapAnalysisRequest {
    std::vector<double> rho_grid;
    std::vector<double> k_grid;
    std::vector<double> e_grid;
    bool with_oracle = false;
};

inline void run_map_analysis(const MapAnalysisRequest& req, const std::filesystem::path& out_csv) {
    if (req.rho_grid.empty() || req.k_grid.empty() || req.e_grid.empty())
        throw std::invalid_argument("map analysis: grids must be nonempty");
    for (double rho : req.rho_grid)
        if (!(rho > 0.0)) throw std::invalid_argument("map analysis: rho values must be positive");
    for (double k : req.k_grid)
        if (!(k > 0.0)) throw std::invalid_argument("map analysis: k values must be positive");

    if (out_csv.has_parent_path()) std::filesystem::create_directories(out_csv.parent_path());
    std::ofstream out(out_csv, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + out_csv.string());

    auto join = [](const std::vector<double>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + format_double(v[i]);
        return s;
    };
    out << "# rho_grid = " << join(req.rho_grid) << "\n";
    out << "# k_grid = " << join(req.k_grid) << "\n";
    out << "# e_grid = " << join(req.e_grid) << "\n";
    out << "# with_oracle = " << (req.with_oracle ? "true" : "false") << "\n";
    out << "rho,k,e_in,t_delta,e_out,slope";
    if (req.with_oracle) out << ",e_out_oracle,t_delta_oracle";
    out << "\n";

    for (double rho : req.rho_grid) {
        for (double k : req.k_grid) {
            const ErrorMapParams p(k, rho * k);
            for (double e : req.e_grid) {
                const double t_delta = crossing_interval(e, p);
                const double e_out = next_crossing_error(e, p);
                const double h = 1e-6 * (rho + std::abs(e));
                const double slope =
                    (next_crossing_error(e + h, p) - next_crossing_error(e - h, p)) / (2.0 * h);
                out << format_double(rho) << "," << format_double(k) << "," << format_double(e)
                    << "," << format_double(t_delta) << "," << format_double(e_out) << ","
                    << format_double(slope);
                if (req.with_oracle) {
                    CrossingRecord rec;
                    if (e != 0.0) rec = oracle_crossing(0.0, e, p, t_delta / 2e5);
                    out << "," << format_double(rec.e_sigma_out) << "," << format_double(rec.t_delta);
                }
                out << "\n";
            }
        }
    }
    if (!out) throw std::runtime_error("write failed: " + out_csv.string());
}

// ---------------------------------------------------------------------------
// compare

struct CompareOutputs {
    std::filesystem::path metrics_csv;
    std::vector<std::filesystem::path> plots;
};

inline CompareOutputs compare_presets(const std::vector<std::string>& preset_args,
                                      std::filesystem::path out_dir = {}) {
    if (preset_args.size() < 2)
        throw std::invalid_argument("compare: needs at least two presets");
    std::vector<ExperimentConfig> cfgs;
    cfgs.reserve(preset_args.size());
    for (const auto& a : preset_args) cfgs.push_back(load_experiment_config(a));

    for (std::size_t i = 1; i < cfgs.size(); ++i) {
        const auto& a = cfgs[0].signal.terms;
        const auto& b = cfgs[i].signal.terms;
        bool same = a.size() == b.size();
        for (std::size_t j = 0; same && j < a.size(); ++j)
            same = a[j].amplitude == b[j].amplitude && a[j].omega == b[j].omega &&
                   a[j].kind == b[j].kind;
        if (!same)
            throw std::invalid_argument("compare: presets '" + cfgs[0].name + "' and '" +
                                        cfgs[i].name +
                                        "' use different signals; comparison requires a shared signal");
    }

    if (out_dir.empty()) {
        if (const char* env = std::getenv(kOutputDirEnvVar); env != nullptr && *env != '\0')
            out_dir = std::filesystem::path(env) / "compare";
        else
            out_dir = std::filesystem::path("out") / "compare";
    }

    // Member simulations share nothing; run them concurrently.
    std::vector<std::future<RunOutputs>> futures;
    futures.reserve(cfgs.size());
    for (const auto& cfg : cfgs)
        futures.push_back(std::async(std::launch::async,
                                     [&cfg]() { return run_experiment(cfg, /*write_files=*/false); }));
    std::vector<RunOutputs> runs;
    runs.reserve(cfgs.size());
    for (auto& f : futures) runs.push_back(f.get());

    std::filesystem::create_directories(out_dir);
    std::vector<std::pair<std::string, std::string>> header;
    for (std::size_t i = 0; i < cfgs.size(); ++i)
        for (const auto& [k, v] : cfgs[i].resolved_header())
            header.emplace_back("p" + std::to_string(i + 1) + "." + k, v);

    // Combined metrics table: one row per (preset, differentiator, order).
    std::vector<MetricRow> rows;
    for (std::size_t i = 0; i < cfgs.size(); ++i) {
        for (const auto& row : runs[i].rows) {
            MetricRow r = row;
            r.differentiator = cfgs[i].name + "/" + row.differentiator;  // preset/method
            rows.push_back(std::move(r));
        }
    }
    CompareOutputs out;
    out.metrics_csv = out_dir / "combined_metrics.csv";
    // All shipped presets record with their own stride; the per-preset stride
    // is in the header, so the table column carries the first preset's.
    write_metrics_csv(out.metrics_csv, header, rows, cfgs[0].plan.record_stride,
                      /*preset_column=*/true);

    std::size_t max_order = 0;
    for (const auto& cfg : cfgs) max_order = std::max(max_order, cfg.orders());
    for (std::size_t order = 1; order <= max_order; ++order) {
        const std::string truth = "true.d" + std::to_string(order);
        std::vector<PlotSeries> series;
        for (std::size_t i = 0; i < cfgs.size(); ++i) {
            if (order > cfgs[i].orders()) continue;
            if (series.empty())
                series.push_back({truth, &runs[i].trajectory.times, &runs[i].trajectory.column(truth)});
            series.push_back({cfgs[i].name, &runs[i].trajectory.times,
                              &runs[i].trajectory.column(cfgs[i].estimate_column(order))});
        }
        if (series.empty()) continue;
        const std::filesystem::path p = out_dir / ("order" + std::to_string(order) + ".svg");
        write_svg_plot(p.string(), "derivative order " + std::to_string(order) + ": estimate vs truth",
                       "t [s]", "value", series, header);
        out.plots.push_back(p);
    }
    return out;
}

// ---------------------------------------------------------------------------
// report: recompute metrics from a trajectory CSV (using the embedded config
// header for band/steady-window/stride when present).

inline std::string report_from_csv(const std::string& csv_path) {
    const CsvFile file = read_trajectory_csv(csv_path);
    auto header_value = [&](const std::string& key) -> std::optional<std::string> {
        for (const auto& [k, v] : file.header)
            if (k == key) return v;
        return std::nullopt;
    };
    const double band = header_value("metrics.band_fraction")
                            ? std::stod(*header_value("metrics.band_fraction"))
                            : 0.02;
    const double t0 = file.traj.times.empty() ? 0.0 : file.traj.times.front();
    const double t1 = file.traj.times.empty() ? 0.0 : file.traj.times.back();
    const double steady_from =
        header_value("metrics.steady_from") ? std::stod(*header_value("metrics.steady_from"))
                                            : 0.5 * (t0 + t1);
    const double steady_to =
        header_value("metrics.steady_to") ? std::stod(*header_value("metrics.steady_to")) : t1;
    const std::uint64_t stride =
        header_value("plan.record_stride")
            ? static_cast<std::uint64_t>(std::stoull(*header_value("plan.record_stride")))
            : 0;

    std::vector<MetricRow> rows;
    for (const auto& name : file.traj.column_names) {
        // Estimate columns look like "<differentiator>.<tail><order>" and pair
        // with "true.d<order>".
        const auto dot = name.find('.');
        if (dot == std::string::npos || name.substr(0, dot) == "true") continue;
        const char last = name.back();
        if (last < '1' || last > '9') continue;
        const std::string truth = std::string("true.d") + last;
        if (!file.traj.has_column(truth)) continue;
        MetricRow row;
        row.differentiator = name.substr(0, dot);
        row.order = static_cast<std::size_t>(last - '0');
        row.est_column = name;
        row.report = compute_metrics(file.traj, name, truth, band, steady_from, steady_to);
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw std::runtime_error(csv_path +
                                 ": no estimate/truth column pairs found (expected columns like "
                                 "'sd.sigma1' alongside 'true.d1')");

    std::ostringstream out;
    for (const auto& [k, v] : file.header) out << "# " << k << " = " << v << "\n";
    out << "differentiator,order,estimate_column,settling_time,peak_abs,peak_time,"
           "chattering_index,rms_error,steady_from,steady_to,band_fraction,record_stride\n";
    for (const auto& row : rows) {
        const auto& r = row.report;
        out << row.differentiator << "," << row.order << "," << row.est_column << ","
            << (r.settling_time ? format_double(*r.settling_time) : "none") << ","
            << format_double(r.peak_abs) << "," << format_double(r.peak_time) << ","
            << format_double(r.chattering_index) << "," << format_double(r.rms_error) << ","
            << format_double(r.steady_from) << "," << format_double(r.steady_to) << ","
            << format_double(r.band_fraction) << "," << stride << "\n";
    }
    return out.str();
}

}  // namespace swdiff
