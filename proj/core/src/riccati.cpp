#include "lqgltr/riccati.hpp"

#include <cmath>

namespace lqgltr {

void NoiseSpec::validate() const {
    if (!(Theta > 0.0)) throw InvalidParams("NoiseSpec: Theta must be > 0");
    if (Xi < 0.0) throw InvalidParams("NoiseSpec: Xi must be >= 0");
    if (q < 0.0) throw InvalidParams("NoiseSpec: q must be >= 0");
}

void WeightSpec::validate() const {
    if (Q.rows() != Q.cols()) throw InvalidParams("WeightSpec: Q must be square");
    if (max_abs(Q - Q.transpose()) > 1e-10 * (1.0 + max_abs(Q)))
        throw InvalidParams("WeightSpec: Q must be symmetric");
    if (!(R > 0.0)) throw InvalidParams("WeightSpec: R must be > 0");
    for (const Complex& ev : eigenvalues(Q))
        if (ev.real() < -1e-9 * (1.0 + max_abs(Q)))
            throw InvalidParams("WeightSpec: Q must be positive semi-definite");
}

namespace {

// phi(A) for the monic polynomial with the given roots, by Horner on matrices.
Matrix poly_of_matrix(const Matrix& A, const Polynomial& p) {
    const Eigen::Index n = A.rows();
    Matrix acc = Matrix::Zero(n, n);
    for (double c : p.coeffs) acc = acc * A + c * Matrix::Identity(n, n);
    return acc;
}

}  // namespace

Matrix stabilizing_gain(const Matrix& A, const Matrix& B,
                        std::span<const Complex> poles) {
    const Eigen::Index n = A.rows();
    if (A.cols() != n || B.rows() != n || B.cols() != 1)
        throw DimensionMismatch("stabilizing_gain: expects square A and n x 1 B");
    if (static_cast<Eigen::Index>(poles.size()) != n)
        throw InvalidParams("stabilizing_gain: need exactly n poles");
    for (const Complex& p : poles)
        if (p.real() >= 0.0)
            throw InvalidParams("stabilizing_gain: poles must be strictly stable");

    Matrix ctrl(n, n);
    Matrix col = B;
    for (Eigen::Index k = 0; k < n; ++k) {
        ctrl.col(k) = col;
        col = A * col;
    }
    if (row_rank(ctrl) < n)
        throw Uncontrollable("stabilizing_gain: controllability matrix is rank-deficient");

    const Polynomial desired = Polynomial::from_roots(poles);
    Matrix selector = Matrix::Zero(1, n);
    selector(0, n - 1) = 1.0;

    Matrix K;
    try {
        K = lu_solve(ctrl.transpose(), selector.transpose()).transpose() *
            poly_of_matrix(A, desired);
    } catch (const SingularMatrix&) {
        throw Uncontrollable("stabilizing_gain: controllability matrix is numerically singular");
    }
    return K;
}

Matrix solve_care(const Matrix& A, const Matrix& B, const Matrix& Q, double R,
                  std::vector<Matrix>* trace) {
    const Eigen::Index n = A.rows();
    if (A.cols() != n || B.rows() != n || B.cols() != 1 || Q.rows() != n ||
        Q.cols() != n)
        throw DimensionMismatch("solve_care: dimension mismatch");
    if (!(R > 0.0)) throw InvalidParams("solve_care: R must be > 0");

    std::vector<Complex> seed_poles(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        seed_poles[static_cast<std::size_t>(i)] = Complex(-2.0 - static_cast<double>(i), 0.0);

    Matrix K;
    try {
        K = stabilizing_gain(A, B, seed_poles);
    } catch (const Uncontrollable&) {
        throw NotStabilizable("solve_care: Ackermann initializer failed (uncontrollable pair)");
    }

    Matrix P = Matrix::Zero(n, n);
    bool converged = false;
    for (int iter = 0; iter < 50; ++iter) {
        const Matrix Acl = A - B * K;
        const Matrix W = Q + K.transpose() * (R * K);
        const Matrix P_next = solve_lyapunov(Acl, W);
        if (trace) trace->push_back(P_next);
        const double delta = max_abs(P_next - P);
        K = (B.transpose() * P_next) / R;
        const bool done = iter > 0 && delta <= 1e-10 * (1.0 + max_abs(P));
        P = P_next;
        if (done) {
            converged = true;
            break;
        }
    }

    const Matrix residual =
        A.transpose() * P + P * A - P * B * B.transpose() * P / R + Q;
    if (!converged || max_abs(residual) > 1e-8 * (1.0 + max_abs(P)))
        throw NoConvergence("solve_care: Newton-Kleinman did not reach residual tolerance");
    return P;
}

Matrix lqr_gain(const StateSpaceModel& sys, const WeightSpec& weights) {
    weights.validate();
    const Matrix P = solve_care(sys.A, sys.B, weights.Q, weights.R);
    Matrix K = (sys.B.transpose() * P) / weights.R;
    if (!is_hurwitz(sys.A - sys.B * K))
        throw NoConvergence("lqr_gain: closed loop not Hurwitz");
    return K;
}

Matrix kalman_gain(const StateSpaceModel& sys, const NoiseSpec& noise) {
    noise.validate();
    if (sys.Gamma.size() == 0 || sys.Gamma.cols() != 1)
        throw DimensionMismatch("kalman_gain: scalar noise channel Gamma required");

    const Matrix W =
        sys.Gamma * (noise.q * noise.Xi) * sys.Gamma.transpose();
    Matrix P;
    try {
        P = solve_care(sys.A.transpose(), sys.C.transpose(), W, noise.Theta);
    } catch (const NotStabilizable&) {
        throw Unobservable("kalman_gain: (A, C) pair is not observable");
    }
    Matrix K = P * sys.C.transpose() / noise.Theta;
    if (!is_hurwitz(sys.A - K * sys.C))
        throw NoConvergence("kalman_gain: filter loop not Hurwitz");
    return K;
}

}  // namespace lqgltr
