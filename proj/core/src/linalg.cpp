#include "lqgltr/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace lqgltr {

Matrix lu_solve(const Matrix& A, const Matrix& B) {
    if (A.rows() != A.cols())
        throw DimensionMismatch("lu_solve: A must be square");
    if (B.rows() != A.rows())
        throw DimensionMismatch("lu_solve: B row count must match A");

    Eigen::PartialPivLU<Matrix> lu(A);
    const double scale = max_abs(A);
    const Vector diag = lu.matrixLU().diagonal().cwiseAbs();
    for (Eigen::Index i = 0; i < diag.size(); ++i) {
        if (diag[i] < 1e-12 * scale || diag[i] == 0.0)
            throw SingularMatrix("lu_solve: pivot " + std::to_string(i) +
                                 " below 1e-12 * max|A|");
    }
    return lu.solve(B);
}

Matrix kron(const Matrix& A, const Matrix& B) {
    Matrix K(A.rows() * B.rows(), A.cols() * B.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return K;
}

std::vector<Complex> eigenvalues(const Matrix& A) {
    if (A.rows() != A.cols())
        throw DimensionMismatch("eigenvalues: matrix must be square");
    if (A.rows() == 0) return {};

    Eigen::EigenSolver<Matrix> solver(A, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw NoConvergence("eigenvalues: QR iteration did not converge");

    std::vector<Complex> out(A.rows());
    for (Eigen::Index i = 0; i < A.rows(); ++i) out[i] = solver.eigenvalues()[i];
    return out;
}

double spectral_abscissa(const Matrix& A) {
    double worst = -std::numeric_limits<double>::infinity();
    for (const Complex& ev : eigenvalues(A)) worst = std::max(worst, ev.real());
    return worst;
}

Matrix solve_lyapunov(const Matrix& A, const Matrix& Q) {
    const Eigen::Index n = A.rows();
    if (A.cols() != n || Q.rows() != n || Q.cols() != n)
        throw DimensionMismatch("solve_lyapunov: A, Q must be square and same size");
    if (!is_hurwitz(A))
        throw NotHurwitz("solve_lyapunov: A has an eigenvalue with Re >= 0");

    const Matrix I = Matrix::Identity(n, n);
    const Matrix At = A.transpose();
    const Matrix M = kron(I, At) + kron(At, I);

    Matrix rhs(n * n, 1);
    rhs.col(0) = -Eigen::Map<const Vector>(Q.data(), n * n);  // column-major vec

    const Matrix sol = lu_solve(M, rhs);
    Matrix P = Eigen::Map<const Matrix>(sol.data(), n, n);
    return 0.5 * (P + P.transpose());
}

double trapezoid(std::span<const double> samples, double dt) {
    if (samples.size() < 2)
        throw InvalidParams("trapezoid: need at least 2 samples");
    if (!(dt > 0.0))
        throw InvalidParams("trapezoid: dt must be positive");

    double acc = 0.5 * (samples.front() + samples.back());
    for (std::size_t k = 1; k + 1 < samples.size(); ++k) acc += samples[k];
    return acc * dt;
}

int row_rank(Matrix M, double rel_tol) {
    if (M.size() == 0) return 0;

    double max_row_norm = 0.0;
    for (Eigen::Index i = 0; i < M.rows(); ++i)
        max_row_norm = std::max(max_row_norm, M.row(i).norm());
    if (max_row_norm == 0.0) return 0;
    const double tol = rel_tol * max_row_norm;

    int rank = 0;
    Eigen::Index col = 0;
    for (Eigen::Index row = 0; row < M.rows() && col < M.cols(); ++col) {
        Eigen::Index pivot = row;
        for (Eigen::Index i = row + 1; i < M.rows(); ++i)
            if (std::abs(M(i, col)) > std::abs(M(pivot, col))) pivot = i;
        if (std::abs(M(pivot, col)) <= tol) continue;
        M.row(pivot).swap(M.row(row));
        for (Eigen::Index i = row + 1; i < M.rows(); ++i)
            M.row(i) -= (M(i, col) / M(row, col)) * M.row(row);
        ++row;
        ++rank;
    }
    return rank;
}

}  // namespace lqgltr
