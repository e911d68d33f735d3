#pragma once

#include <optional>

#include "lqgltr/plant.hpp"

namespace lqgltr {

// Process/measurement noise intensities plus the recovery multiplier q; the
// filter design always sees the inflated intensity q * Xi.
struct NoiseSpec {
    double Xi = 1e-3;    // process noise intensity, >= 0
    double Theta = 1e-7; // measurement noise intensity, > 0
    double q = 1.0;      // fictitious-noise coefficient, >= 0

    void validate() const;  // throws InvalidParams
};

// State/control weights of the quadratic cost. The cross-weight is
// structurally zero and not represented.
struct WeightSpec {
    Matrix Q;       // n x n, symmetric PSD
    double R = 1.0; // > 0

    void validate() const;
};

struct GainSet {
    Matrix K_c;                  // 1 x n state feedback
    Matrix K_f;                  // n x 1 Kalman gain
    std::optional<Matrix> K_i;   // 1 x 1 integral gain, servo designs only
    WeightSpec weights;          // provenance
    NoiseSpec noise;             // provenance
};

// Ackermann's formula: gain placing eig(A - B K) at `poles` (conjugate-closed,
// all strictly stable). Used to seed Newton-Kleinman. Throws Uncontrollable.
Matrix stabilizing_gain(const Matrix& A, const Matrix& B,
                        std::span<const Complex> poles);

// Stabilizing solution of  A^T P + P A - P B R^-1 B^T P + Q = 0  by
// Newton-Kleinman iteration seeded with an Ackermann gain at poles
// {-2, -3, ...}. Kleinman, "On an iterative technique for Riccati equation
// computations", IEEE TAC 13(1), 1968. `trace`, when given, receives the
// P_k iterates (monotonically non-increasing in the PSD order).
Matrix solve_care(const Matrix& A, const Matrix& B, const Matrix& Q, double R,
                  std::vector<Matrix>* trace = nullptr);

// K_c = R^-1 B^T P_c; A - B K_c is Hurwitz on return.
Matrix lqr_gain(const StateSpaceModel& sys, const WeightSpec& weights);

// Dual CARE on (A^T, C^T, Gamma (q Xi) Gamma^T, Theta); K_f = P_f C^T / Theta.
Matrix kalman_gain(const StateSpaceModel& sys, const NoiseSpec& noise);

}  // namespace lqgltr
