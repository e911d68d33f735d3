#pragma once

#include <string>

#include "lqgltr/riccati.hpp"

namespace lqgltr {

enum class ControllerKind { LqgRegulator, LqgLtr, HybridServo };

// State-space controller realization. Input layout depends on kind:
//   LqgRegulator / LqgLtr: single input y, output is the feedback signal
//     K_c x_hat (the loop applies u = -K_c x_hat);
//   HybridServo: inputs (r, y), output is u = -K_c x_hat - K_i x_i directly.
struct ControllerRealization {
    Matrix A_k, B_k, C_k, D_k;
    ControllerKind kind = ControllerKind::LqgRegulator;
    std::vector<std::string> input_names;
    GainSet gains;  // provenance

    Eigen::Index order() const { return A_k.rows(); }
    std::string to_json() const;  // matrices row-major + 1-DOF TF coefficients
};

// Plant + controller interconnection with exogenous inputs (r, xi, theta) and
// monitored outputs. The origin is an equilibrium when all exogenous inputs
// vanish.
struct ClosedLoop {
    Matrix A;        // combined dynamics
    Matrix E_r;      // reference column (zero for regulator loops)
    Matrix E_xi;     // process-noise column
    Matrix E_theta;  // measurement-noise column
    Matrix C_y;      // true plant output row
    Matrix C_u;      // control signal row
    Eigen::Index n_plant = 0;
    Eigen::Index estimator_offset = -1;  // index of x_hat block, -1 if none
    double q_design = 1.0;               // recovery multiplier used at design time
    std::vector<std::string> plant_labels;

    Eigen::Index n() const { return A.rows(); }
};

enum class LoopKind { LQG, LQR };

// Observer-based output feedback: A_k = A - B K_c - K_f C, B_k = K_f,
// C_k = K_c, D_k = 0. Tagged LqgLtr when the gains were designed with q != 1.
ControllerRealization lqg_controller(const StateSpaceModel& sys,
                                     const GainSet& gains);

// LQR mode: K_c (sI - A)^-1 B. LQG mode: the controller/plant cascade
// K_c (sI - A + K_f C + B K_c)^-1 K_f C (sI - A)^-1 B, realized in state
// space first and converted once.
TransferFunction open_loop_tf(const StateSpaceModel& sys, const GainSet& gains,
                              LoopKind mode);

// LQR on the integrator-augmented plant with block weight diag(Q, Q_i);
// returns (K_c, K_i) from the split 1 x (n+1) gain.
std::pair<Matrix, Matrix> lqi_gains(const StateSpaceModel& sys,
                                    const WeightSpec& weights, double Q_i);

// Two-input (r, y) servo realization:
//   x_hat' = (A - B K_c - K_f C) x_hat - B K_i x_i + K_f y
//   x_i'   = r - y
//   u      = -K_c x_hat - K_i x_i
ControllerRealization servo_controller(const StateSpaceModel& sys,
                                       const GainSet& gains);

// 1-DOF equivalent e -> u transfer of a servo controller (y = -e, r = 0).
// For LQG regulators this is the e -> u transfer of the unity loop, i.e. the
// observer-based controller TF itself.
TransferFunction controller_tf_1dof(const ControllerRealization& ctrl);

// Open loop G_c(s) G_p(s) of the 1-DOF unity-feedback arrangement.
TransferFunction open_loop_tf_1dof(const StateSpaceModel& sys,
                                   const ControllerRealization& ctrl);

ClosedLoop closed_loop(const StateSpaceModel& sys,
                       const ControllerRealization& ctrl);

}  // namespace lqgltr
