#pragma once

// Trajectory metrics: settling time, transient peak, excess-total-variation
// chattering index, and steady-window RMS error. All metrics operate on the
// recorded samples only; stride quantization is accepted and the stride is
// reported alongside stride-sensitive quantities.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "trajectory.hpp"

namespace swdiff {

struct MetricReport {
    std::optional<double> settling_time;  // [s], absent if the band is never held
    double peak_abs = 0.0;
    double peak_time = 0.0;
    double chattering_index = 0.0;  // excess total variation per second (may be < 0)
    double rms_error = 0.0;
    double steady_from = 0.0, steady_to = 0.0;
    double band_fraction = 0.02;
};

// Earliest recorded time T such that |est - truth| <= band_fraction * sup|truth|
// holds at every recorded sample from T to the end; nullopt if never.
inline std::optional<double> settling_time(const Trajectory& traj, const std::string& est_col,
                                           const std::string& truth_col, double band_fraction = 0.02) {
    if (!(band_fraction > 0.0 && band_fraction < 1.0))
        throw std::invalid_argument("settling_time: band_fraction must be in (0, 1)");
    const auto& est = traj.column(est_col);
    const auto& truth = traj.column(truth_col);
    if (est.empty()) return std::nullopt;
    double sup = 0.0;
    for (double v : truth) sup = std::max(sup, std::abs(v));
    const double band = band_fraction * sup;
    // Scan backwards: the settling index is one past the last out-of-band sample.
    std::size_t first_ok = 0;
    for (std::size_t j = est.size(); j-- > 0;) {
        if (std::abs(est[j] - truth[j]) > band) {
            first_ok = j + 1;
            break;
        }
    }
    if (first_ok >= est.size()) return std::nullopt;
    return traj.times[first_ok];
}

// Max |value| over recorded samples and its first attaining time.
inline std::pair<double, double> peak_abs(const Trajectory& traj, const std::string& col) {
    const auto& v = traj.column(col);
    if (v.empty()) throw std::invalid_argument("peak_abs: empty column");
    double best = -1.0, at = traj.times.front();
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (std::abs(v[j]) > best) {
            best = std::abs(v[j]);
            at = traj.times[j];
        }
    }
    return {best, at};
}

namespace detail {

inline std::pair<std::size_t, std::size_t> window_range(const Trajectory& traj, double from,
                                                        double to) {
    std::size_t b = 0, e = traj.times.size();
    while (b < e && traj.times[b] < from) ++b;
    while (e > b && traj.times[e - 1] > to) --e;
    if (e - b < 2) throw std::invalid_argument("metrics: window holds fewer than two samples");
    return {b, e};
}

inline double total_variation(const std::vector<double>& v, std::size_t b, std::size_t e) {
    double tv = 0.0;
    for (std::size_t j = b + 1; j < e; ++j) tv += std::abs(v[j] - v[j - 1]);
    return tv;
}

}  // namespace detail

// (TV(est) - TV(truth)) / window length, on recorded samples in [from, to].
// Near zero for smooth tracking, large and positive for chattering; can be
// slightly negative for over-smoothed estimates (reported as computed).
inline double chattering_index(const Trajectory& traj, const std::string& est_col,
                               const std::string& truth_col, double from, double to) {
    const auto [b, e] = detail::window_range(traj, from, to);
    const auto& est = traj.column(est_col);
    const auto& truth = traj.column(truth_col);
    const double wlen = traj.times[e - 1] - traj.times[b];
    return (detail::total_variation(est, b, e) - detail::total_variation(truth, b, e)) / wlen;
}

inline double rms_error(const Trajectory& traj, const std::string& est_col,
                        const std::string& truth_col, double from, double to) {
    const auto [b, e] = detail::window_range(traj, from, to);
    const auto& est = traj.column(est_col);
    const auto& truth = traj.column(truth_col);
    double acc = 0.0;
    for (std::size_t j = b; j < e; ++j) {
        const double d = est[j] - truth[j];
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(e - b));
}

inline MetricReport compute_metrics(const Trajectory& traj, const std::string& est_col,
                                    const std::string& truth_col, double band_fraction,
                                    double steady_from, double steady_to) {
    MetricReport r;
    r.band_fraction = band_fraction;
    r.steady_from = steady_from;
    r.steady_to = steady_to;
    r.settling_time = settling_time(traj, est_col, truth_col, band_fraction);
    const auto [p, pt] = peak_abs(traj, est_col);
    r.peak_abs = p;
    r.peak_time = pt;
    r.chattering_index = chattering_index(traj, est_col, truth_col, steady_from, steady_to);
    r.rms_error = rms_error(traj, est_col, truth_col, steady_from, steady_to);
    return r;
}

}  // namespace swdiff
