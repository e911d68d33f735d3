#pragma once

#include <vector>

#include "lqgltr/linalg.hpp"

namespace lqgltr {

// Real-coefficient polynomial, highest degree first. The zero polynomial is
// represented as {0.0}.
struct Polynomial {
    std::vector<double> coeffs{0.0};

    Polynomial() = default;
    explicit Polynomial(std::vector<double> c);

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    bool is_zero(double rel_tol = 0.0) const;
    double leading() const { return coeffs.front(); }

    double eval(double s) const;
    Complex eval(const Complex& s) const;

    // Drops leading coefficients with |c| <= rel_tol * max|coeffs|.
    Polynomial trimmed(double rel_tol = 1e-12) const;
    Polynomial monic() const;

    Polynomial operator*(const Polynomial& rhs) const;
    Polynomial operator+(const Polynomial& rhs) const;
    Polynomial operator*(double k) const;

    // Real polynomial from a conjugate-closed root set.
    static Polynomial from_roots(std::span<const Complex> roots);
};

// det(sI - A) together with the resolvent expansion
//   adj(sI - A) = sum_k resolvent[k] * s^(n-1-k),
// both from one Faddeev-LeVerrier pass. The resolvent matrices feed the
// transfer-function numerators.
struct CharPoly {
    Polynomial poly;
    std::vector<Matrix> resolvent;
};

CharPoly char_poly(const Matrix& A);

// Roots via eigenvalues of the companion matrix of the monic polynomial.
std::vector<Complex> poly_roots(const Polynomial& p);

}  // namespace lqgltr
