// Full-scale acceptance gate. Each numbered criterion prints exactly one
// PASS/FAIL line with its measured values and the pinned tolerance; the
// process exits nonzero if any line reads FAIL. Criteria and tolerances:
//   1  Lambert-W kernel residuals (1e4 points, residual <= 1e-13; endpoints
//      to 1e-12)
//   2  error-map properties (contraction, oddness, alternation, scale law to
//      1e-12 relative, origin slope -1 +- 1e-3)
//   3  closed form vs brute-force oracle within 1e-4 relative on 30 points
//   4  sd-paper-1: sigma4 settling in [0.05, 0.2] s, no peaking (<= 1.5x),
//      sigma1 steady RMS <= 0.05
//   5  sd-paper-2 settling strictly below sd-paper-1
//   6  hgo-paper: peak z1 = 1552.1 +- 10%, peak z4 in [1e9, 1.6e10],
//      peaks strictly increasing with order
//   7  hosm-paper z4 chattering index >= 10x sd-paper-1 sigma4's
//   8  measured integrator orders: RK4 in [3.8, 4.2], Euler in [0.9, 1.1]
//   9  byte-identical CSVs across re-runs of every preset

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <string>
#include <vector>

#include "swdiff/experiment.hpp"
#include "swdiff/lambert_w.hpp"

using namespace swdiff;

namespace {

bool g_all_ok = true;

void line(int index, bool ok, const std::string& detail) {
    if (!ok) g_all_ok = false;
    std::printf("%d. %s  %s\n", index, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
}

// --- 1 -----------------------------------------------------------------

void criterion_lambert() {
    const double inv_e = std::exp(-1.0);
    double worst = 0.0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        // |y| log-spaced over 290 decades, the top point 1e-14 shy of 1/e so
        // the branch-point corner is exercised from inside the open interval.
        const double f = std::pow(10.0, -290.0 * (1.0 - static_cast<double>(i) / (n - 1)));
        const double y = -inv_e * f * (1.0 - 1e-14);
        const double w = lambert_w0(y);
        worst = std::max(worst, std::abs(w * std::exp(w) - y));
    }
    const double end_lo = std::abs(lambert_w0(-inv_e) - (-1.0));
    const double end_hi = std::abs(lambert_w0(0.0));
    const bool ok = worst <= 1e-13 && end_lo <= 1e-12 && end_hi <= 1e-12;
    line(1, ok,
         "lambert-w kernel: max residual " + fmt(worst) + " (tol 1e-13), |W(-1/e)+1| = " +
             fmt(end_lo) + ", |W(0)| = " + fmt(end_hi) + " (tol 1e-12)");
}

// --- 2 -----------------------------------------------------------------

void criterion_map_properties() {
    double worst_scale = 0.0, worst_slope = 0.0;
    bool contraction = true, odd = true, alternation = true;
    const ErrorMapParams unit(1.0, 1.0);
    for (double rho : {0.01, 1.0, 100.0}) {
        for (double k : {1.0, 1000.0}) {
            const ErrorMapParams p(k, rho * k);
            for (int i = 0; i < 50; ++i) {
                const double u = std::pow(10.0, -6.0 + 9.0 * i / 49.0);  // 1e-6 .. 1e3
                const double e = u * rho;
                const double out = next_crossing_error(e, p);
                contraction = contraction && std::abs(out) < e;
                odd = odd && next_crossing_error(-e, p) == -out;
                alternation = alternation && out < 0.0;
                const double ref = rho * next_crossing_error(u, unit);
                worst_scale = std::max(worst_scale, std::abs(out - ref) / std::abs(ref));
            }
            worst_slope = std::max(worst_slope, std::abs(map_slope_at_origin(p) - (-1.0)));
        }
    }
    const bool ok =
        contraction && odd && alternation && worst_scale <= 1e-12 && worst_slope <= 1e-3;
    line(2, ok,
         std::string("error-map properties: contraction ") + (contraction ? "ok" : "VIOLATED") +
             ", oddness " + (odd ? "exact" : "VIOLATED") + ", alternation " +
             (alternation ? "ok" : "VIOLATED") + ", scale-law rel err " + fmt(worst_scale) +
             " (tol 1e-12), slope err " + fmt(worst_slope) + " (tol 1e-3)");
}

// --- 3 -----------------------------------------------------------------

void criterion_oracle() {
    // 30 points: 5 magnitudes x 3 rho x 2 k.
    double worst_t = 0.0, worst_e = 0.0;  // normalized by their tolerances
    for (double rho : {0.05, 1.0, 20.0}) {
        for (double k : {1.0, 300.0}) {
            const ErrorMapParams p(k, rho * k);
            for (double u : {0.01, 0.3, 1.0, 3.0, 30.0}) {
                const double e = u * rho;
                const double t_ref = crossing_interval(e, p);
                const double e_ref = next_crossing_error(e, p);
                const CrossingRecord rec = oracle_crossing(0.0, e, p, t_ref / 2e5);
                const double t_tol = 1e-4 * (1.0 / p.k + t_ref);
                worst_t = std::max(worst_t, std::abs(rec.t_delta - t_ref) / t_tol);
                worst_e = std::max(worst_e, std::abs(rec.e_sigma_out - e_ref) / (p.L_delta * t_tol));
            }
        }
    }
    const bool ok = worst_t <= 1.0 && worst_e <= 1.0;
    line(3, ok,
         "oracle equivalence on 30 points: worst |dt_delta|/tol = " + fmt(worst_t) +
             ", worst |de_out|/tol = " + fmt(worst_e) +
             " (tol 1e-4*(1/k + t_delta), e scaled by L_delta)");
}

// --- 4..7 ----------------------------------------------------------------

struct PresetRun {
    ExperimentConfig cfg;
    RunOutputs a, b;
};

PresetRun run_preset_twice(const std::string& name) {
    PresetRun r{load_experiment_config(name), {}, {}};
    ExperimentConfig ca = r.cfg, cb = r.cfg;
    ca.output_dir = (std::filesystem::path("acceptance_out") / "a" / name).string();
    cb.output_dir = (std::filesystem::path("acceptance_out") / "b" / name).string();
    r.a = run_experiment(ca);
    r.b = run_experiment(cb);
    return r;
}

double settling_of(const PresetRun& r, std::size_t order) {
    const auto& report = r.a.rows.at(order - 1).report;
    return report.settling_time ? *report.settling_time
                                : std::numeric_limits<double>::infinity();
}

void criterion_sd1(const PresetRun& sd1) {
    const double settle = settling_of(sd1, 4);
    const bool settle_ok = settle >= 0.05 && settle <= 0.2;

    double worst_ratio = 0.0;
    for (std::size_t order = 1; order <= 4; ++order) {
        const auto& truth = sd1.a.trajectory.column("true.d" + std::to_string(order));
        double sup = 0.0;
        for (double v : truth) sup = std::max(sup, std::abs(v));
        worst_ratio = std::max(worst_ratio, sd1.a.rows[order - 1].report.peak_abs / sup);
    }
    const bool peak_ok = worst_ratio <= 1.5;

    const double rms1 = sd1.a.rows[0].report.rms_error;
    const bool rms_ok = rms1 <= 0.05;

    line(4, settle_ok && peak_ok && rms_ok,
         "sd-paper-1: sigma4 settling " + fmt(settle) +
             " s (need [0.05, 0.2]), worst peak/sup ratio " + fmt(worst_ratio) +
             " (need <= 1.5), sigma1 steady RMS " + fmt(rms1) + " (need <= 0.05)");
}

void criterion_sd2(const PresetRun& sd1, const PresetRun& sd2) {
    const double s1 = settling_of(sd1, 4), s2 = settling_of(sd2, 4);
    const bool ok = s2 < s1;
    std::string detail = "sd-paper-2 sigma4 settling " + fmt(s2) + " s vs sd-paper-1 " + fmt(s1) +
                         " s (need strictly smaller)";
    if (!ok)
        detail +=
            "  [expected failure: with the shared sat width eps=1e-4, every stage's boundary "
            "layer resonates at omega_n = sqrt(L/eps) with in-layer gain omega_n^2/k ~ 2e4, so "
            "raising k,L to 5000,10000 amplifies late sigma4 ripple past the 2% band; see notes "
            "in the repository README]";
    line(5, ok, detail);
}

void criterion_hgo(const PresetRun& hgo) {
    const double z1 = hgo.a.rows[0].report.peak_abs;
    const double z2 = hgo.a.rows[1].report.peak_abs;
    const double z3 = hgo.a.rows[2].report.peak_abs;
    const double z4 = hgo.a.rows[3].report.peak_abs;
    const bool z1_ok = z1 >= 1552.1 * 0.9 && z1 <= 1552.1 * 1.1;
    const bool z4_ok = z4 >= 1e9 && z4 <= 1.6e10;
    const bool mono_ok = z1 < z2 && z2 < z3 && z3 < z4;
    line(6, z1_ok && z4_ok && mono_ok,
         "hgo-paper peaks: |z1| " + fmt(z1) + " (need 1552.1 +- 10%), |z4| " + fmt(z4) +
             " (need [1e9, 1.6e10]), monotone " + (mono_ok ? "yes" : "NO") + " (" + fmt(z1) +
             " < " + fmt(z2) + " < " + fmt(z3) + " < " + fmt(z4) + ")");
}

void criterion_hosm(const PresetRun& sd1, const PresetRun& hosm) {
    const double sd_idx = sd1.a.rows[3].report.chattering_index;
    const double hosm_idx = hosm.a.rows[3].report.chattering_index;
    const double ratio = hosm_idx / sd_idx;
    const bool ok = sd_idx > 0.0 && ratio >= 10.0;
    line(7, ok,
         "chattering index z4: hosm-paper " + fmt(hosm_idx) + "/s vs sd-paper-1 " + fmt(sd_idx) +
             "/s, ratio " + fmt(ratio) + " (need >= 10)");
}

// --- 8 -----------------------------------------------------------------

void criterion_orders() {
    OdeSystem decay;
    decay.dimension = 1;
    decay.rhs = [](double, const std::vector<double>& x, std::vector<double>& d) { d[0] = -x[0]; };
    auto err = [&decay](StepMethod m, double dt) {
        SimPlan plan{0.0, 1.0, dt, 1};
        const Trajectory t = simulate(decay, {1.0}, plan, m, {{"x", 0, {}}});
        return std::abs(t.column("x").back() - std::exp(-1.0));
    };
    const double p_euler = std::log2(err(StepMethod::Euler, 1e-3) / err(StepMethod::Euler, 5e-4));
    const double p_rk4 = std::log2(err(StepMethod::Rk4, 0.05) / err(StepMethod::Rk4, 0.025));
    const bool ok = p_euler >= 0.9 && p_euler <= 1.1 && p_rk4 >= 3.8 && p_rk4 <= 4.2;
    line(8, ok,
         "integrator orders on x' = -x: euler " + fmt(p_euler) + " (need [0.9, 1.1]), rk4 " +
             fmt(p_rk4) + " (need [3.8, 4.2])");
}

// --- 9 -----------------------------------------------------------------

void criterion_determinism(const std::vector<const PresetRun*>& runs) {
    bool ok = true;
    std::string mismatches;
    for (const PresetRun* r : runs) {
        const bool traj_same = slurp(r->a.trajectory_csv) == slurp(r->b.trajectory_csv);
        const bool metrics_same = slurp(r->a.metrics_csv) == slurp(r->b.metrics_csv);
        if (!(traj_same && metrics_same)) {
            ok = false;
            mismatches += " " + r->cfg.name;
        }
    }
    line(9, ok,
         ok ? "determinism: all four presets re-ran to byte-identical trajectory and metrics CSVs"
            : "determinism: byte mismatch in preset(s):" + mismatches);
}

}  // namespace

int main() {
    ::unsetenv(kOutputDirEnvVar);  // criteria pin their own output locations
    const auto t0 = std::chrono::steady_clock::now();

    criterion_lambert();
    criterion_map_properties();
    criterion_oracle();

    // The four paper presets, each run twice (second run feeds criterion 9).
    auto sd1_f = std::async(std::launch::async, run_preset_twice, "sd-paper-1");
    auto sd2_f = std::async(std::launch::async, run_preset_twice, "sd-paper-2");
    auto hgo_f = std::async(std::launch::async, run_preset_twice, "hgo-paper");
    auto hosm_f = std::async(std::launch::async, run_preset_twice, "hosm-paper");
    const PresetRun sd1 = sd1_f.get();
    const PresetRun sd2 = sd2_f.get();
    const PresetRun hgo = hgo_f.get();
    const PresetRun hosm = hosm_f.get();

    criterion_sd1(sd1);
    criterion_sd2(sd1, sd2);
    criterion_hgo(hgo);
    criterion_hosm(sd1, hosm);
    criterion_orders();
    criterion_determinism({&sd1, &sd2, &hgo, &hosm});

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s (%.1f s)\n", g_all_ok ? "ALL CRITERIA PASS" : "SOME CRITERIA FAILED",
                elapsed);
    return g_all_ok ? 0 : 1;
}
