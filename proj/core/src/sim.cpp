#include "lqgltr/sim.hpp"

#include <cmath>
#include <random>

#include "lqgltr/csv.hpp"

namespace lqgltr {

namespace {

constexpr double kDivergenceBound = 1e9;

// mt19937_64 has a standardized output sequence; the uniform mapping and
// Box-Muller below are fixed here so seeded runs reproduce across platforms
// (std::normal_distribution is implementation-defined).
class GaussianRng {
public:
    explicit GaussianRng(std::uint64_t seed) : gen_(seed) {}

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        constexpr double two_pi = 6.283185307179586476925286766559;
        spare_ = mag * std::sin(two_pi * u2);
        have_spare_ = true;
        return mag * std::cos(two_pi * u2);
    }

private:
    double uniform() {  // in [0, 1)
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    // splitmix64 finalizer over the combined word
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

void SimConfig::validate() const {
    if (!(dt > 0.0)) throw InvalidParams("SimConfig: dt must be > 0");
    if (!(t_final > step_time) || step_time < 0.0)
        throw InvalidParams("SimConfig: need t_final > step_time >= 0");
}

Trajectory simulate(const ClosedLoop& loop, const SimConfig& cfg,
                    const Vector& x0) {
    cfg.validate();
    const Eigen::Index n = loop.n();
    Vector x = x0.size() == 0 ? Vector(Vector::Zero(n)) : Vector(x0);
    if (x.size() != n) throw DimensionMismatch("simulate: x0 size mismatch");

    const auto steps = static_cast<std::size_t>(std::llround(cfg.t_final / cfg.dt));
    const bool noisy =
        cfg.noise_enabled && (cfg.sim_Xi > 0.0 || cfg.sim_Theta > 0.0);

    Trajectory traj;
    traj.plant_labels = loop.plant_labels;
    if (traj.plant_labels.size() != static_cast<std::size_t>(loop.n_plant)) {
        traj.plant_labels.clear();
        for (Eigen::Index i = 0; i < loop.n_plant; ++i)
            traj.plant_labels.push_back("x" + std::to_string(i + 1));
    }
    traj.t.reserve(steps + 1);
    traj.plant_states.assign(static_cast<std::size_t>(loop.n_plant), {});

    const bool has_est =
        loop.estimator_offset >= 0 && loop.estimator_offset + loop.n_plant <= n;

    const auto record = [&](double t, const Vector& state) {
        traj.t.push_back(t);
        traj.y.push_back((loop.C_y * state)(0));
        traj.u.push_back((loop.C_u * state)(0));
        for (Eigen::Index i = 0; i < loop.n_plant; ++i)
            traj.plant_states[static_cast<std::size_t>(i)].push_back(state[i]);
        if (has_est)
            traj.est_err.push_back(
                (state.head(loop.n_plant) -
                 state.segment(loop.estimator_offset, loop.n_plant))
                    .norm());
    };

    record(0.0, x);

    GaussianRng rng(cfg.seed);
    const double process_scale =
        noisy ? std::sqrt(std::max(0.0, cfg.sim_Xi * loop.q_design * cfg.dt)) : 0.0;
    const double theta_std = noisy ? std::sqrt(std::max(0.0, cfg.sim_Theta)) : 0.0;

    for (std::size_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * cfg.dt;
        if (noisy) {
            const double w = rng.normal();
            const double theta = theta_std * rng.normal();
            const Vector drift = loop.A * x + loop.E_r * cfg.reference(t) +
                                 loop.E_theta * theta;
            x += cfg.dt * drift + loop.E_xi * (process_scale * w);
        } else {
            const auto f = [&](double tau, const Vector& z) -> Vector {
                return loop.A * z + loop.E_r * cfg.reference(tau);
            };
            const Vector k1 = f(t, x);
            const Vector k2 = f(t + 0.5 * cfg.dt, x + 0.5 * cfg.dt * k1);
            const Vector k3 = f(t + 0.5 * cfg.dt, x + 0.5 * cfg.dt * k2);
            const Vector k4 = f(t + cfg.dt, x + cfg.dt * k3);
            x += (cfg.dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        if (x.cwiseAbs().maxCoeff() > kDivergenceBound) {
            traj.diverged = true;
            break;
        }
        record(static_cast<double>(k + 1) * cfg.dt, x);
    }
    return traj;
}

StepMetrics step_metrics(const Trajectory& traj, const SimConfig& cfg) {
    StepMetrics m;
    if (traj.t.size() < 2) return m;

    const double amp = cfg.step_amplitude;
    std::size_t k0 = 0;
    while (k0 < traj.t.size() && traj.t[k0] < cfg.step_time) ++k0;
    if (k0 >= traj.t.size()) k0 = traj.t.size() - 1;

    std::vector<double> e2;
    e2.reserve(traj.t.size() - k0);
    for (std::size_t k = k0; k < traj.t.size(); ++k) {
        const double e = cfg.reference(traj.t[k]) - traj.y[k];
        e2.push_back(e * e);
    }
    if (e2.size() >= 2) m.ise = trapezoid(e2, cfg.dt);

    m.steady_state_error =
        std::abs(cfg.reference(traj.t.back()) - traj.y.back());

    const double sign = amp >= 0.0 ? 1.0 : -1.0;
    const double abs_amp = std::abs(amp);
    double worst = 0.0;
    for (std::size_t k = k0; k < traj.t.size(); ++k)
        worst = std::max(worst, (traj.y[k] - amp) * sign);
    m.overshoot_pct = abs_amp > 0.0 ? 100.0 * worst / abs_amp : 0.0;

    if (abs_amp > 0.0) {
        const double band = 0.02 * abs_amp;
        std::size_t last_out = k0;
        bool ever_out = false;
        for (std::size_t k = k0; k < traj.t.size(); ++k) {
            if (std::abs(traj.y[k] - amp) > band) {
                last_out = k;
                ever_out = true;
            }
        }
        if (!ever_out) {
            m.settled = true;
            m.settling_time = 0.0;
        } else if (last_out + 1 < traj.t.size()) {
            m.settled = true;
            m.settling_time = traj.t[last_out + 1] - cfg.step_time;
        } else {
            m.settled = false;
            m.settling_time = traj.t.back() - cfg.step_time;
        }
    }

    for (double v : traj.u) m.peak_u = std::max(m.peak_u, std::abs(v));

    for (std::size_t i = 0; i < traj.plant_labels.size(); ++i) {
        if (traj.plant_labels[i] == "delta") {
            double peak = 0.0;
            for (double v : traj.plant_states[i]) peak = std::max(peak, std::abs(v));
            m.peak_delta = peak;
            break;
        }
    }
    return m;
}

std::string Trajectory::to_csv() const {
    csv::Writer w;
    std::vector<std::string> names{"t", "y", "u"};
    for (const std::string& label : plant_labels) names.push_back(label);
    if (!est_err.empty()) names.push_back("est_error");
    w.header(names);
    for (std::size_t k = 0; k < t.size(); ++k) {
        std::vector<double> row{t[k], y[k], u[k]};
        for (const auto& channel : plant_states) row.push_back(channel[k]);
        if (!est_err.empty()) row.push_back(est_err[k]);
        w.row(row);
    }
    return w.str();
}

std::vector<SweepRow> param_sweep(const MissileParams& base,
                                  std::span<const double> delta_M_alpha_grid,
                                  std::span<const double> h_grid,
                                  const ControllerRealization& ctrl,
                                  const SimConfig& cfg) {
    if (delta_M_alpha_grid.empty() || h_grid.empty())
        throw InvalidParams("param_sweep: empty grid");

    std::vector<SweepRow> rows;
    rows.reserve(delta_M_alpha_grid.size() * h_grid.size());
    for (double dMa : delta_M_alpha_grid) {
        for (double h : h_grid) {
            MissileParams p = base;
            p.delta_M_alpha = dMa;
            p.h = h;
            SweepRow row;
            row.delta_M_alpha = dMa;
            row.h = h;
            const StateSpaceModel plant = build_missile_model(p);
            const Trajectory traj = simulate(closed_loop(plant, ctrl), cfg);
            row.metrics = step_metrics(traj, cfg);
            row.diverged = traj.diverged;
            rows.push_back(row);
        }
    }
    return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    csv::Writer w;
    w.header({"delta_M_alpha", "h", "ise", "steady_state_error", "overshoot_pct",
              "settling_time", "settled", "peak_u", "peak_delta", "diverged"});
    for (const SweepRow& r : rows)
        w.row({r.delta_M_alpha, r.h, r.metrics.ise, r.metrics.steady_state_error,
               r.metrics.overshoot_pct, r.metrics.settling_time,
               r.metrics.settled ? 1.0 : 0.0, r.metrics.peak_u,
               r.metrics.peak_delta, r.diverged ? 1.0 : 0.0});
    return w.str();
}

std::vector<MismatchCell> covariance_mismatch_study(
    const ClosedLoop& loop, const NoiseSpec& design,
    std::span<const double> xi_factors, std::span<const double> theta_factors,
    const SimConfig& cfg, int seeds_per_cell) {
    if (xi_factors.empty() || theta_factors.empty())
        throw InvalidParams("covariance_mismatch_study: empty grid");
    if (seeds_per_cell < 1)
        throw InvalidParams("covariance_mismatch_study: seeds_per_cell must be >= 1");

    Eigen::Index delta_idx = -1;
    for (std::size_t i = 0; i < loop.plant_labels.size(); ++i)
        if (loop.plant_labels[i] == "delta") delta_idx = static_cast<Eigen::Index>(i);

    std::vector<MismatchCell> cells;
    std::uint64_t cell_index = 0;
    for (double fx : xi_factors) {
        for (double ft : theta_factors) {
            MismatchCell cell;
            cell.xi_factor = fx;
            cell.theta_factor = ft;
            cell.seeds = seeds_per_cell;

            std::vector<double> rms_samples;
            for (int rep = 0; rep < seeds_per_cell; ++rep) {
                SimConfig run = cfg;
                run.noise_enabled = true;
                run.sim_Xi = design.Xi * fx;
                run.sim_Theta = design.Theta * ft;
                run.seed = derive_seed(cfg.seed, cell_index * 1000003ull +
                                                     static_cast<std::uint64_t>(rep));
                const Trajectory traj = simulate(loop, run);
                cell.any_diverged = cell.any_diverged || traj.diverged;
                if (traj.diverged) continue;

                std::size_t k0 = 0;
                while (k0 < traj.t.size() && traj.t[k0] < cfg.step_time) ++k0;
                const std::size_t count = traj.t.size() - k0;
                if (count == 0) continue;

                double peak = 0.0, sum_sq = 0.0;
                if (delta_idx >= 0) {
                    const auto& d = traj.plant_states[static_cast<std::size_t>(delta_idx)];
                    for (std::size_t k = k0; k < d.size(); ++k) {
                        peak = std::max(peak, std::abs(d[k]));
                        sum_sq += d[k] * d[k];
                    }
                }
                double y_mean = 0.0, u_mean = 0.0;
                for (std::size_t k = k0; k < traj.t.size(); ++k) {
                    y_mean += traj.y[k];
                    u_mean += traj.u[k];
                }
                y_mean /= static_cast<double>(count);
                u_mean /= static_cast<double>(count);
                double y_var = 0.0, u_var = 0.0;
                for (std::size_t k = k0; k < traj.t.size(); ++k) {
                    y_var += (traj.y[k] - y_mean) * (traj.y[k] - y_mean);
                    u_var += (traj.u[k] - u_mean) * (traj.u[k] - u_mean);
                }
                y_var /= static_cast<double>(count);
                u_var /= static_cast<double>(count);

                const double rms = std::sqrt(sum_sq / static_cast<double>(count));
                rms_samples.push_back(rms);
                cell.delta_peak_mean += peak;
                cell.delta_rms_mean += rms;
                cell.y_var_mean += y_var;
                cell.u_var_mean += u_var;
            }

            const double n_ok = static_cast<double>(rms_samples.size());
            if (n_ok > 0) {
                cell.delta_peak_mean /= n_ok;
                cell.delta_rms_mean /= n_ok;
                cell.y_var_mean /= n_ok;
                cell.u_var_mean /= n_ok;
                double var = 0.0;
                for (double r : rms_samples)
                    var += (r - cell.delta_rms_mean) * (r - cell.delta_rms_mean);
                cell.delta_rms_std = n_ok > 1 ? std::sqrt(var / (n_ok - 1.0)) : 0.0;
            }
            cells.push_back(cell);
            ++cell_index;
        }
    }
    return cells;
}

std::string mismatch_to_csv(const std::vector<MismatchCell>& cells) {
    csv::Writer w;
    w.header({"xi_factor", "theta_factor", "delta_peak", "delta_rms",
              "delta_rms_std", "y_var", "u_var", "seeds", "diverged"});
    for (const MismatchCell& c : cells)
        w.row({c.xi_factor, c.theta_factor, c.delta_peak_mean, c.delta_rms_mean,
               c.delta_rms_std, c.y_var_mean, c.u_var_mean,
               static_cast<double>(c.seeds), c.any_diverged ? 1.0 : 0.0});
    return w.str();
}

}  // namespace lqgltr
