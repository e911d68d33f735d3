#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

#include "lqgltr/error.hpp"

namespace lqgltr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Complex = std::complex<double>;

// Largest absolute entry; zero for empty matrices. Used for all relative
// tolerances (plant entries span 0.27 to 20, absolute floors would misfire).
inline double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// Solves A X = B by LU with partial pivoting.
// Throws SingularMatrix when a pivot falls below 1e-12 * max|A|.
Matrix lu_solve(const Matrix& A, const Matrix& B);

// Kronecker product, standard block layout.
Matrix kron(const Matrix& A, const Matrix& B);

// Eigenvalues via Hessenberg reduction + shifted QR (Eigen's real solver),
// conjugate pairs adjacent. Throws NoConvergence if the QR iteration fails.
std::vector<Complex> eigenvalues(const Matrix& A);

// max_i Re(lambda_i)
double spectral_abscissa(const Matrix& A);

inline bool is_hurwitz(const Matrix& A) { return spectral_abscissa(A) < 0.0; }

// Solves A^T P + P A + Q = 0 for symmetric P by Kronecker vectorization
//   (I (x) A^T + A^T (x) I) vec(P) = -vec(Q).
// O(n^6), fine at the n <= 8 sizes used here. Throws NotHurwitz when A has an
// eigenvalue with nonnegative real part.
Matrix solve_lyapunov(const Matrix& A, const Matrix& Q);

// Composite trapezoidal rule on a uniform grid.
double trapezoid(std::span<const double> samples, double dt);

// Numerical row rank by Gaussian elimination; a row counts as nonzero while
// its norm stays above rel_tol * (largest row norm of the input).
int row_rank(Matrix M, double rel_tol = 1e-9);

}  // namespace lqgltr
