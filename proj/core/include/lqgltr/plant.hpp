#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lqgltr/polynomial.hpp"

namespace lqgltr {

// Aerodynamic derivatives and seeker parameters of the canard missile pitch
// model. Defaults are the nominal design point used throughout.
struct MissileParams {
    double Z_alpha = -2.7;        // 1/s
    double Z_delta = 0.27;        // 1/s
    double M_alpha = -5.5;        // 1/s^2
    double M_q = -0.4;            // 1/s
    double M_delta = -19.0;       // 1/s^2
    double tau_s = 0.05;          // s, seeker time constant
    double h = 0.5;               // s, radome bore-sight error slope
    double delta_M_alpha = 0.0;   // 1/s^2, pitch-stiffness perturbation

    void validate() const;  // throws InvalidParams

    // Round-trips through a JSON object with keys named exactly like the
    // fields; missing keys keep their defaults.
    std::string to_json() const;
    static MissileParams from_json(const std::string& text);
};

// Dense LTI model  x' = A x + B u + Gamma xi,  y = C x + D u + theta.
// `ref_input`, when non-empty, is the exogenous reference channel of an
// integrator-augmented model (r enters the error integrator only, so it stays
// out of B and gain design sees the same matrices as simulation).
struct StateSpaceModel {
    Matrix A, B, C, D, Gamma;
    Matrix ref_input;  // n x 1 or empty
    std::vector<std::string> state_labels;

    Eigen::Index n() const { return A.rows(); }
    bool is_siso() const { return B.cols() == 1 && C.rows() == 1; }
    void validate() const;  // throws DimensionMismatch
};

struct TransferFunction {
    Polynomial num;
    Polynomial den;

    Complex eval(const Complex& s) const { return num.eval(s) / den.eval(s); }
    // Equivalent TF with monic denominator.
    TransferFunction normalized() const;
};

// Three-state pitch model: states (alpha, pitch rate, canard deflection).
StateSpaceModel build_missile_model(const MissileParams& params);

// (controllability rank, observability rank) by row reduction at relative
// tolerance 1e-9.
std::pair<int, int> reachability_ranks(const StateSpaceModel& sys);

// SISO transfer function via Faddeev-LeVerrier: den = char_poly(A),
// num = C adj(sI - A) B + D den, common leading zeros trimmed.
TransferFunction ss_to_tf(const StateSpaceModel& sys, int input_index = 0,
                          int output_index = 0);

// Roots of the ss_to_tf numerator. Throws DegenerateNumerator when the
// numerator is identically zero.
std::vector<Complex> system_zeros(const StateSpaceModel& sys);

// Error-integrator augmentation: state [x; x_i], x_i' = -C x + r with r kept
// as a separate reference channel. A_aug = [[A, 0], [-C, 0]], B_aug = [B; 0],
// C_aug = [C, 0].
StateSpaceModel augment_with_integrator(const StateSpaceModel& sys);

}  // namespace lqgltr
