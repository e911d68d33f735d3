#pragma once

#include <array>
#include <functional>

#include "lqgltr/sim.hpp"

namespace lqgltr {

struct SimplexOptions {
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
    double initial_scale = 0.05;  // relative per-coordinate perturbation
    double zero_step = 0.00025;   // absolute step when a coordinate is zero
    int max_iterations = 500;
    double f_tol = 1e-6;  // relative f-spread
    double x_tol = 1e-6;  // relative x-spread

    void validate() const;
};

struct NmEval {
    Vector x;
    double f = 0.0;
};

struct NmResult {
    Vector x_best;
    double f_best = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<NmEval> log;  // every objective evaluation, in order
};

// Standard Nelder-Mead (reflection / expansion / outside-inside contraction /
// shrink). Deterministic given (f, x0, opts). Throws ObjectiveNaN if f returns
// NaN; the offending point is the last log entry.
NmResult nelder_mead(const std::function<double(const Vector&)>& f,
                     const Vector& x0, const SimplexOptions& opts = {});

// FULL tunes (Q1, Q2, Q3, R, q); FIXED_Q pins Q = C^T C and tunes (R, q).
enum class TuneMode { Full, FixedQ };

// Candidate decode is log-space, x = ln(Q1, Q2, Q3, R, q), so positivity is
// structural. FIXED_Q ignores the Q coordinates entirely. The value is the
// noise-free step-ISE of the hybrid servo loop over 20 s at dt = 1e-3;
// synthesis failures and unstable loops return 1e6 plus a feasibility
// distance instead of throwing.
double objective(const StateSpaceModel& sys, TuneMode mode, const Vector& x_log,
                 const NoiseSpec& base);

struct TuneResult {
    TuneMode mode = TuneMode::Full;
    double J_min = 0.0;
    double q_initial = 0.0;
    double q_opt = 0.0;
    std::array<double, 3> Q_diag{1.0, 1.0, 1.0};
    double R = 1.0;
    int iterations = 0;
    bool converged = false;
    std::vector<NmEval> log;
};

// Nelder-Mead from the unit initial guess (Q = I, R = 1, q = q0).
TuneResult tune(const StateSpaceModel& sys, TuneMode mode, double q0,
                const NoiseSpec& base = {}, const SimplexOptions& opts = {});

std::vector<TuneResult> tune_batch(const StateSpaceModel& sys, TuneMode mode,
                                   std::span<const double> q0_values,
                                   const NoiseSpec& base = {},
                                   const SimplexOptions& opts = {});

// Column order of the paper's result tables: J_min, q_initial, q_opt,
// Q1, Q2, Q3, R. Q cells stay empty in FIXED_Q mode.
std::string tune_table_csv(const std::vector<TuneResult>& rows);

}  // namespace lqgltr
