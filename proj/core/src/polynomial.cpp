#include "lqgltr/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace lqgltr {

Polynomial::Polynomial(std::vector<double> c) : coeffs(std::move(c)) {
    if (coeffs.empty()) coeffs = {0.0};
}

bool Polynomial::is_zero(double rel_tol) const {
    double scale = 0.0;
    for (double c : coeffs) scale = std::max(scale, std::abs(c));
    if (scale == 0.0) return true;
    for (double c : coeffs)
        if (std::abs(c) > rel_tol * scale) return false;
    return true;
}

double Polynomial::eval(double s) const {
    double acc = 0.0;
    for (double c : coeffs) acc = acc * s + c;
    return acc;
}

Complex Polynomial::eval(const Complex& s) const {
    Complex acc = 0.0;
    for (double c : coeffs) acc = acc * s + c;
    return acc;
}

Polynomial Polynomial::trimmed(double rel_tol) const {
    double scale = 0.0;
    for (double c : coeffs) scale = std::max(scale, std::abs(c));
    std::size_t first = 0;
    while (first + 1 < coeffs.size() && std::abs(coeffs[first]) <= rel_tol * scale)
        ++first;
    return Polynomial(std::vector<double>(coeffs.begin() + first, coeffs.end()));
}

Polynomial Polynomial::monic() const {
    Polynomial t = trimmed();
    if (t.leading() == 0.0)
        throw InvalidParams("monic: zero polynomial");
    std::vector<double> c = t.coeffs;
    for (double& x : c) x /= t.leading();
    return Polynomial(std::move(c));
}

Polynomial Polynomial::operator*(const Polynomial& rhs) const {
    std::vector<double> out(coeffs.size() + rhs.coeffs.size() - 1, 0.0);
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        for (std::size_t j = 0; j < rhs.coeffs.size(); ++j)
            out[i + j] += coeffs[i] * rhs.coeffs[j];
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator+(const Polynomial& rhs) const {
    const std::size_t n = std::max(coeffs.size(), rhs.coeffs.size());
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        out[n - coeffs.size() + i] += coeffs[i];
    for (std::size_t i = 0; i < rhs.coeffs.size(); ++i)
        out[n - rhs.coeffs.size() + i] += rhs.coeffs[i];
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator*(double k) const {
    std::vector<double> out = coeffs;
    for (double& c : out) c *= k;
    return Polynomial(std::move(out));
}

Polynomial Polynomial::from_roots(std::span<const Complex> roots) {
    // Multiply complex linear factors, then check the imaginary residue.
    std::vector<Complex> acc{1.0};
    for (const Complex& r : roots) {
        std::vector<Complex> next(acc.size() + 1, 0.0);
        for (std::size_t i = 0; i < acc.size(); ++i) {
            next[i] += acc[i];
            next[i + 1] -= acc[i] * r;
        }
        acc = std::move(next);
    }
    double scale = 0.0;
    for (const Complex& c : acc) scale = std::max(scale, std::abs(c));
    std::vector<double> out(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i) {
        if (std::abs(acc[i].imag()) > 1e-9 * std::max(scale, 1.0))
            throw InvalidParams("from_roots: root set not closed under conjugation");
        out[i] = acc[i].real();
    }
    return Polynomial(std::move(out));
}

CharPoly char_poly(const Matrix& A) {
    const Eigen::Index n = A.rows();
    if (A.cols() != n)
        throw DimensionMismatch("char_poly: matrix must be square");

    CharPoly out;
    out.poly.coeffs.assign(static_cast<std::size_t>(n) + 1, 0.0);
    out.poly.coeffs[0] = 1.0;
    out.resolvent.reserve(n);

    // Faddeev-LeVerrier: M_1 = I, c_k = -tr(A M_k)/k, M_{k+1} = A M_k + c_k I.
    Matrix M = Matrix::Identity(n, n);
    for (Eigen::Index k = 1; k <= n; ++k) {
        out.resolvent.push_back(M);
        const double c = -(A * M).trace() / static_cast<double>(k);
        out.poly.coeffs[static_cast<std::size_t>(k)] = c;
        if (k < n) M = A * M + c * Matrix::Identity(n, n);
    }
    return out;
}

std::vector<Complex> poly_roots(const Polynomial& p) {
    const Polynomial m = p.trimmed();
    if (m.degree() < 1)
        throw InvalidParams("poly_roots: degree must be >= 1");
    if (m.leading() == 0.0)
        throw InvalidParams("poly_roots: zero polynomial");

    const Polynomial mm = m.monic();
    const int n = mm.degree();
    Matrix companion = Matrix::Zero(n, n);
    for (int j = 0; j < n; ++j) companion(0, j) = -mm.coeffs[static_cast<std::size_t>(j) + 1];
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    return eigenvalues(companion);
}

}  // namespace lqgltr
