#pragma once

#include <optional>

#include "lqgltr/synthesis.hpp"

namespace lqgltr {

struct FrequencyGrid {
    std::vector<double> omega;  // rad/s, strictly increasing, > 0

    static FrequencyGrid log_default() { return logspace(1e-2, 1e4, 400); }
    static FrequencyGrid logspace(double lo, double hi, int points);
};

struct FreqSample {
    double omega = 0.0;
    Complex value{0.0, 0.0};
    bool pole_on_grid = false;  // |den(j w)| below threshold; value unusable
};

// G(j omega) by Horner evaluation of num/den. Grid points that hit a pole are
// flagged and skipped rather than thrown.
std::vector<FreqSample> freq_response(const TransferFunction& tf,
                                      const FrequencyGrid& grid);

struct Margins {
    // nullopt encodes +infinity (no phase crossover). Never a large float.
    std::optional<double> gain_margin_db;
    std::optional<double> phase_margin_deg;  // absent without a gain crossover
    std::optional<double> omega_phase_crossover;
    std::optional<double> omega_gain_crossover;
};

// Stability margins of a SISO negative-feedback loop transfer. Crossovers are
// bracketed on a dense grid and refined by bisection to 1e-6 relative in
// omega; with several phase crossovers the smallest gain margin is reported.
Margins margins(const TransferFunction& open_loop);

// Eq.-15-style ISE: realizes (1/s) * 1/(1 + G_ol) in controllable canonical
// form, integrates its impulse response (RK4) and returns the trapezoid of
// the squared output. Throws UnstableClosedLoop when 1 + G_ol has a root with
// Re >= 0.
double sensitivity_ise(const TransferFunction& open_loop);

// For each q: gap = max over the default grid of
// |G_ol_LQG(j w; q) - G_ol_LQR(j w)|. K_c comes from `weights` once; the
// filter is redesigned per q with intensity q * noise.Xi.
std::vector<std::pair<double, double>> recovery_gap(
    const StateSpaceModel& sys, const WeightSpec& weights,
    const NoiseSpec& noise, std::span<const double> q_list);

std::string bode_csv(const TransferFunction& tf, const FrequencyGrid& grid);

}  // namespace lqgltr
