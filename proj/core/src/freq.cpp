#include "lqgltr/freq.hpp"

#include <cmath>

#include "lqgltr/csv.hpp"

namespace lqgltr {

FrequencyGrid FrequencyGrid::logspace(double lo, double hi, int points) {
    if (!(lo > 0.0) || !(hi > lo) || points < 2)
        throw InvalidParams("FrequencyGrid: need 0 < lo < hi and points >= 2");
    FrequencyGrid g;
    g.omega.resize(static_cast<std::size_t>(points));
    const double step = (std::log10(hi) - std::log10(lo)) / (points - 1);
    for (int i = 0; i < points; ++i)
        g.omega[static_cast<std::size_t>(i)] = std::pow(10.0, std::log10(lo) + step * i);
    return g;
}

std::vector<FreqSample> freq_response(const TransferFunction& tf,
                                      const FrequencyGrid& grid) {
    if (tf.den.is_zero())
        throw InvalidParams("freq_response: zero denominator");

    double den_scale = 0.0;
    for (double c : tf.den.coeffs) den_scale = std::max(den_scale, std::abs(c));

    std::vector<FreqSample> out;
    out.reserve(grid.omega.size());
    for (double w : grid.omega) {
        FreqSample s;
        s.omega = w;
        const Complex d = tf.den.eval(Complex(0.0, w));
        if (std::abs(d) < 1e-14 * den_scale) {
            s.pole_on_grid = true;
        } else {
            s.value = tf.num.eval(Complex(0.0, w)) / d;
        }
        out.push_back(s);
    }
    return out;
}

namespace {

Complex eval_tf(const TransferFunction& tf, double w) {
    return tf.num.eval(Complex(0.0, w)) / tf.den.eval(Complex(0.0, w));
}

// Bisection refinement of a bracketed zero of f on [lo, hi], to 1e-6 relative.
template <typename F>
double bisect(F&& f, double lo, double hi) {
    double flo = f(lo);
    for (int it = 0; it < 200 && (hi - lo) > 1e-6 * lo; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = f(mid);
        if ((flo <= 0.0) == (fmid <= 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

Margins margins(const TransferFunction& open_loop) {
    const FrequencyGrid grid = FrequencyGrid::log_default();
    std::vector<Complex> vals(grid.omega.size());
    for (std::size_t i = 0; i < grid.omega.size(); ++i)
        vals[i] = eval_tf(open_loop, grid.omega[i]);

    Margins m;

    // Phase crossovers: Im G = 0 with Re G < 0 (the negative real axis).
    for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
        if (vals[i].imag() == 0.0 || (vals[i].imag() < 0.0) == (vals[i + 1].imag() < 0.0))
            continue;
        const double w0 = bisect(
            [&](double w) { return eval_tf(open_loop, w).imag(); },
            grid.omega[i], grid.omega[i + 1]);
        const Complex g = eval_tf(open_loop, w0);
        if (g.real() >= 0.0) continue;
        const double gm = -20.0 * std::log10(std::abs(g));
        if (!m.gain_margin_db || gm < *m.gain_margin_db) {
            m.gain_margin_db = gm;
            m.omega_phase_crossover = w0;
        }
    }

    // Gain crossover: |G| = 1, lowest-frequency crossing.
    for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
        const double a = std::abs(vals[i]) - 1.0;
        const double b = std::abs(vals[i + 1]) - 1.0;
        if (a == 0.0 || (a < 0.0) == (b < 0.0)) continue;
        const double w0 = bisect(
            [&](double w) { return std::abs(eval_tf(open_loop, w)) - 1.0; },
            grid.omega[i], grid.omega[i + 1]);
        const Complex g = eval_tf(open_loop, w0);
        m.omega_gain_crossover = w0;
        m.phase_margin_deg = 180.0 + std::arg(g) * 180.0 / M_PI;
        break;
    }
    return m;
}

double sensitivity_ise(const TransferFunction& open_loop) {
    const TransferFunction tf = open_loop.normalized();

    // closed(s) = den + num; S = den / closed.
    const Polynomial closed = tf.den + tf.num;
    for (const Complex& root : poly_roots(closed))
        if (root.real() >= 0.0)
            throw UnstableClosedLoop("sensitivity_ise: 1 + G_ol has a root with Re >= 0");

    // E(s) = S(s)/s = den / (s * closed); cancel the structural s factor when
    // the open loop contains an integrator, so no marginal mode is realized.
    Polynomial num = tf.den;
    Polynomial den = closed * Polynomial({1.0, 0.0});
    double num_scale = 0.0, den_scale = 0.0;
    for (double c : num.coeffs) num_scale = std::max(num_scale, std::abs(c));
    for (double c : den.coeffs) den_scale = std::max(den_scale, std::abs(c));
    while (num.coeffs.size() > 1 && den.coeffs.size() > 1 &&
           std::abs(num.coeffs.back()) <= 1e-9 * num_scale &&
           std::abs(den.coeffs.back()) <= 1e-9 * den_scale) {
        num.coeffs.pop_back();
        den.coeffs.pop_back();
    }

    // Controllable canonical realization of num/den (strictly proper here).
    const Polynomial dm = den.monic();
    const int n = dm.degree();
    if (num.degree() >= n)
        throw InvalidParams("sensitivity_ise: expected strictly proper error transform");
    Matrix A = Matrix::Zero(n, n);
    for (int j = 0; j < n; ++j) A(0, j) = -dm.coeffs[static_cast<std::size_t>(j) + 1];
    for (int i = 1; i < n; ++i) A(i, i - 1) = 1.0;
    Vector b = Vector::Zero(n);
    b[0] = 1.0;
    Vector c = Vector::Zero(n);
    const double lead = den.leading();
    for (int i = 0; i <= num.degree(); ++i)
        c[n - 1 - num.degree() + i] = num.coeffs[static_cast<std::size_t>(i)] / lead;

    // Impulse response: x(0) = b, y = c^T x, RK4 to t = 50 s.
    constexpr double kDt = 1e-4;
    constexpr double kHorizon = 50.0;
    const auto steps = static_cast<std::size_t>(kHorizon / kDt);
    Vector x = b;
    std::vector<double> y_sq;
    y_sq.reserve(steps + 1);
    y_sq.push_back(std::pow(c.dot(x), 2));
    for (std::size_t k = 0; k < steps; ++k) {
        const Vector k1 = A * x;
        const Vector k2 = A * (x + 0.5 * kDt * k1);
        const Vector k3 = A * (x + 0.5 * kDt * k2);
        const Vector k4 = A * (x + kDt * k3);
        x += (kDt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        y_sq.push_back(std::pow(c.dot(x), 2));
    }
    return trapezoid(y_sq, kDt);
}

std::vector<std::pair<double, double>> recovery_gap(
    const StateSpaceModel& sys, const WeightSpec& weights,
    const NoiseSpec& noise, std::span<const double> q_list) {
    for (std::size_t i = 0; i + 1 < q_list.size(); ++i)
        if (!(q_list[i] > 0.0))
            throw InvalidParams("recovery_gap: q values must be positive");

    GainSet gains;
    gains.K_c = lqr_gain(sys, weights);
    gains.weights = weights;
    const TransferFunction lqr_tf = open_loop_tf(sys, gains, LoopKind::LQR);

    const FrequencyGrid grid = FrequencyGrid::log_default();
    const auto lqr_samples = freq_response(lqr_tf, grid);

    std::vector<std::pair<double, double>> out;
    out.reserve(q_list.size());
    for (double q : q_list) {
        NoiseSpec n = noise;
        n.q = q;
        gains.noise = n;
        gains.K_f = kalman_gain(sys, n);
        const TransferFunction lqg_tf = open_loop_tf(sys, gains, LoopKind::LQG);
        const auto lqg_samples = freq_response(lqg_tf, grid);

        double gap = 0.0;
        for (std::size_t i = 0; i < grid.omega.size(); ++i) {
            if (lqr_samples[i].pole_on_grid || lqg_samples[i].pole_on_grid) continue;
            gap = std::max(gap, std::abs(lqg_samples[i].value - lqr_samples[i].value));
        }
        out.emplace_back(q, gap);
    }
    return out;
}

std::string bode_csv(const TransferFunction& tf, const FrequencyGrid& grid) {
    csv::Writer w;
    w.header({"omega", "magnitude_db", "phase_deg"});
    for (const FreqSample& s : freq_response(tf, grid)) {
        if (s.pole_on_grid) continue;
        w.row({s.omega, 20.0 * std::log10(std::abs(s.value)),
               std::arg(s.value) * 180.0 / M_PI});
    }
    return w.str();
}

}  // namespace lqgltr
