#include "lqgltr/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lqgltr/csv.hpp"

namespace lqgltr {

void SimplexOptions::validate() const {
    if (!(reflection > 0.0) || !(expansion > 1.0) || !(contraction > 0.0) ||
        contraction >= 1.0 || !(shrink > 0.0) || shrink >= 1.0)
        throw InvalidParams("SimplexOptions: coefficient out of range");
    if (max_iterations < 1)
        throw InvalidParams("SimplexOptions: max_iterations must be >= 1");
}

NmResult nelder_mead(const std::function<double(const Vector&)>& f,
                     const Vector& x0, const SimplexOptions& opts) {
    opts.validate();
    const Eigen::Index n = x0.size();
    if (n < 1) throw InvalidParams("nelder_mead: dimension must be >= 1");

    NmResult result;
    const auto eval = [&](const Vector& x) {
        const double v = f(x);
        result.log.push_back({x, v});
        if (std::isnan(v))
            throw ObjectiveNaN("nelder_mead: objective returned NaN (see last log entry)");
        return v;
    };

    std::vector<Vector> xs;
    std::vector<double> fs;
    xs.reserve(static_cast<std::size_t>(n) + 1);
    xs.push_back(x0);
    for (Eigen::Index i = 0; i < n; ++i) {
        Vector xi = x0;
        xi[i] += xi[i] != 0.0 ? opts.initial_scale * xi[i] : opts.zero_step;
        xs.push_back(xi);
    }
    for (const Vector& x : xs) fs.push_back(eval(x));

    std::vector<std::size_t> order(xs.size());
    const auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), 0u);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
    };

    int iter = 0;
    for (; iter < opts.max_iterations; ++iter) {
        sort_simplex();
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second_worst = order[order.size() - 2];

        const double f_spread = fs[worst] - fs[best];
        double x_spread = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i)
            x_spread = std::max(x_spread,
                                (xs[i] - xs[best]).cwiseAbs().maxCoeff());
        if (f_spread <= opts.f_tol * (1.0 + std::abs(fs[best])) &&
            x_spread <= opts.x_tol * (1.0 + xs[best].cwiseAbs().maxCoeff())) {
            result.converged = true;
            break;
        }

        Vector centroid = Vector::Zero(n);
        for (std::size_t i = 0; i < xs.size(); ++i)
            if (i != worst) centroid += xs[i];
        centroid /= static_cast<double>(xs.size() - 1);

        const Vector xr = centroid + opts.reflection * (centroid - xs[worst]);
        const double fr = eval(xr);

        if (fr < fs[best]) {
            const Vector xe = centroid + opts.expansion * (xr - centroid);
            const double fe = eval(xe);
            if (fe < fr) {
                xs[worst] = xe;
                fs[worst] = fe;
            } else {
                xs[worst] = xr;
                fs[worst] = fr;
            }
            continue;
        }
        if (fr < fs[second_worst]) {
            xs[worst] = xr;
            fs[worst] = fr;
            continue;
        }

        bool shrink_step = false;
        if (fr < fs[worst]) {
            const Vector xc = centroid + opts.contraction * (xr - centroid);
            const double fc = eval(xc);
            if (fc <= fr) {
                xs[worst] = xc;
                fs[worst] = fc;
            } else {
                shrink_step = true;
            }
        } else {
            const Vector xc = centroid - opts.contraction * (centroid - xs[worst]);
            const double fc = eval(xc);
            if (fc < fs[worst]) {
                xs[worst] = xc;
                fs[worst] = fc;
            } else {
                shrink_step = true;
            }
        }

        if (shrink_step) {
            for (std::size_t i = 0; i < xs.size(); ++i) {
                if (i == best) continue;
                xs[i] = xs[best] + opts.shrink * (xs[i] - xs[best]);
                fs[i] = eval(xs[i]);
            }
        }
    }

    sort_simplex();
    result.x_best = xs[order.front()];
    result.f_best = fs[order.front()];
    result.iterations = iter;
    return result;
}

double objective(const StateSpaceModel& sys, TuneMode mode, const Vector& x_log,
                 const NoiseSpec& base) {
    if (x_log.size() != 5)
        throw InvalidParams("objective: expects the 5-vector ln(Q1,Q2,Q3,R,q)");

    const Eigen::Index n = sys.n();
    Matrix Q;
    double R = 0.0, q = 0.0;
    if (mode == TuneMode::FixedQ) {
        Q = sys.C.transpose() * sys.C;  // exactly C^T C
        R = std::exp(x_log[3]);
        q = std::exp(x_log[4]);
    } else {
        Q = Matrix::Zero(n, n);
        for (Eigen::Index i = 0; i < std::min<Eigen::Index>(3, n); ++i)
            Q(i, i) = std::exp(x_log[i]);
        R = std::exp(x_log[3]);
        q = std::exp(x_log[4]);
    }
    if (!std::isfinite(R) || !std::isfinite(q) || !(max_abs(Q) < 1e100) ||
        R <= 0.0 || q <= 0.0)
        return 2e6;  // decode overflow/underflow

    try {
        NoiseSpec noise = base;
        noise.q = q;

        GainSet gains;
        gains.K_f = kalman_gain(sys, noise);
        const WeightSpec weights{Q, R};
        auto [K_c, K_i] = lqi_gains(sys, weights, 1.0);
        gains.K_c = K_c;
        gains.K_i = K_i;
        gains.weights = weights;
        gains.noise = noise;

        const ClosedLoop loop = closed_loop(sys, servo_controller(sys, gains));
        const double abscissa = spectral_abscissa(loop.A);
        if (abscissa >= 0.0) return 1e6 + abscissa;

        SimConfig cfg;
        cfg.dt = 1e-3;
        cfg.t_final = 20.0;
        cfg.step_time = 0.0;
        cfg.step_amplitude = 1.0;
        cfg.noise_enabled = false;
        const Trajectory traj = simulate(loop, cfg);
        if (traj.diverged) return 1e6 + 1.0;
        return step_metrics(traj, cfg).ise;
    } catch (const Error&) {
        return 1e6 + 1e3;  // synthesis failure
    }
}

namespace {

Vector embed_fixed_q(const Vector& x2) {
    Vector x = Vector::Zero(5);
    x[3] = x2[0];
    x[4] = x2[1];
    return x;
}

}  // namespace

TuneResult tune(const StateSpaceModel& sys, TuneMode mode, double q0,
                const NoiseSpec& base, const SimplexOptions& opts) {
    if (!(q0 > 0.0)) throw InvalidParams("tune: q0 must be > 0");

    TuneResult result;
    result.mode = mode;
    result.q_initial = q0;

    NmResult nm;
    if (mode == TuneMode::Full) {
        Vector x0 = Vector::Zero(5);
        x0[4] = std::log(q0);
        nm = nelder_mead(
            [&](const Vector& x) { return objective(sys, mode, x, base); }, x0,
            opts);
        for (int i = 0; i < 3; ++i)
            result.Q_diag[static_cast<std::size_t>(i)] = std::exp(nm.x_best[i]);
        result.R = std::exp(nm.x_best[3]);
        result.q_opt = std::exp(nm.x_best[4]);
    } else {
        Vector x0 = Vector::Zero(2);
        x0[1] = std::log(q0);
        nm = nelder_mead(
            [&](const Vector& x) {
                return objective(sys, mode, embed_fixed_q(x), base);
            },
            x0, opts);
        result.Q_diag = {1.0, 0.0, 0.0};  // C^T C for C = [1 0 0]
        result.R = std::exp(nm.x_best[0]);
        result.q_opt = std::exp(nm.x_best[1]);
    }

    result.J_min = nm.f_best;
    result.iterations = nm.iterations;
    result.converged = nm.converged;
    result.log = std::move(nm.log);
    return result;
}

std::vector<TuneResult> tune_batch(const StateSpaceModel& sys, TuneMode mode,
                                   std::span<const double> q0_values,
                                   const NoiseSpec& base,
                                   const SimplexOptions& opts) {
    std::vector<TuneResult> out;
    out.reserve(q0_values.size());
    for (double q0 : q0_values) out.push_back(tune(sys, mode, q0, base, opts));
    return out;
}

std::string tune_table_csv(const std::vector<TuneResult>& rows) {
    csv::Writer w;
    w.header({"J_min", "q_initial", "q_opt", "Q1", "Q2", "Q3", "R"});
    for (const TuneResult& r : rows) {
        if (r.mode == TuneMode::Full) {
            w.row({r.J_min, r.q_initial, r.q_opt, r.Q_diag[0], r.Q_diag[1],
                   r.Q_diag[2], r.R});
        } else {
            w.append_row({csv::format(r.J_min), csv::format(r.q_initial),
                          csv::format(r.q_opt), "", "", "", csv::format(r.R)});
        }
    }
    return w.str();
}

}  // namespace lqgltr
