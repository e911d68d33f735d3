#pragma once

#include <cstdint>
#include <limits>

#include "lqgltr/synthesis.hpp"

namespace lqgltr {

struct SimConfig {
    double dt = 1e-3;
    double t_final = 20.0;
    double step_time = 1.0;       // reference step instant
    double step_amplitude = 1.0;
    bool noise_enabled = false;
    std::uint64_t seed = 0;
    double sim_Xi = 1e-3;         // simulation-time intensities; may differ
    double sim_Theta = 1e-7;      // from the design covariances

    void validate() const;
    double reference(double t) const {
        return t >= step_time ? step_amplitude : 0.0;
    }
};

struct Trajectory {
    std::vector<double> t;
    std::vector<double> y;  // true plant output (noise-free)
    std::vector<double> u;
    std::vector<std::vector<double>> plant_states;  // one channel per state
    std::vector<double> est_err;                    // ||x - x_hat||, if estimator present
    std::vector<std::string> plant_labels;
    bool diverged = false;

    std::string to_csv() const;
};

struct StepMetrics {
    double ise = 0.0;
    double steady_state_error = 0.0;
    double overshoot_pct = 0.0;
    double settling_time = std::numeric_limits<double>::quiet_NaN();  // 2% band
    bool settled = false;
    double peak_u = 0.0;
    double peak_delta = std::numeric_limits<double>::quiet_NaN();
};

// Fixed-step integration of the closed loop from x0 (zeros when empty).
// Noise-free runs use RK4. Runs with noise_enabled and a nonzero variance use
// Euler-Maruyama: process increment E_xi * sqrt(sim_Xi * q_design * dt) * w_k,
// measurement sample theta_k ~ N(0, sim_Theta) held over the step and entering
// the drift. noise_enabled with both variances zero degenerates to the RK4
// path exactly. Divergence (any |x| > 1e9) truncates and flags the trajectory.
Trajectory simulate(const ClosedLoop& loop, const SimConfig& cfg,
                    const Vector& x0 = Vector());

// e(t) = r(t) - y(t); ISE integrates e^2 from step_time with the trapezoid
// rule. u statistics come straight from the simulated control channel.
StepMetrics step_metrics(const Trajectory& traj, const SimConfig& cfg);

struct SweepRow {
    double delta_M_alpha = 0.0;
    double h = 0.0;
    StepMetrics metrics;
    bool diverged = false;
};

// Robustness sweep: the controller is held fixed, only the plant is perturbed.
std::vector<SweepRow> param_sweep(const MissileParams& base,
                                  std::span<const double> delta_M_alpha_grid,
                                  std::span<const double> h_grid,
                                  const ControllerRealization& ctrl,
                                  const SimConfig& cfg);

std::string sweep_to_csv(const std::vector<SweepRow>& rows);

struct MismatchCell {
    double xi_factor = 1.0;
    double theta_factor = 1.0;
    double delta_peak_mean = 0.0;
    double delta_rms_mean = 0.0;
    double delta_rms_std = 0.0;  // across seeds
    double y_var_mean = 0.0;
    double u_var_mean = 0.0;
    int seeds = 0;
    bool any_diverged = false;
};

// Fig.-11-style study: the loop stays designed at the nominal covariances; the
// simulated intensities are inflated per cell. Each cell averages >= 10 seeds
// drawn from an independent stream derived from (cfg.seed, cell index, rep).
std::vector<MismatchCell> covariance_mismatch_study(
    const ClosedLoop& loop, const NoiseSpec& design,
    std::span<const double> xi_factors, std::span<const double> theta_factors,
    const SimConfig& cfg, int seeds_per_cell = 10);

std::string mismatch_to_csv(const std::vector<MismatchCell>& cells);

// Deterministic per-cell RNG stream derivation (splitmix64 mixing).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace lqgltr
