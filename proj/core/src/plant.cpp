#include "lqgltr/plant.hpp"

#include <json.hpp>

namespace lqgltr {

void MissileParams::validate() const {
    if (!(tau_s > 0.0))
        throw InvalidParams("MissileParams: tau_s must be positive, got " +
                            std::to_string(tau_s));
}

std::string MissileParams::to_json() const {
    nlohmann::json j{
        {"Z_alpha", Z_alpha},   {"Z_delta", Z_delta},
        {"M_alpha", M_alpha},   {"M_q", M_q},
        {"M_delta", M_delta},   {"tau_s", tau_s},
        {"h", h},               {"delta_M_alpha", delta_M_alpha},
    };
    return j.dump();
}

MissileParams MissileParams::from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    MissileParams p;
    p.Z_alpha = j.value("Z_alpha", p.Z_alpha);
    p.Z_delta = j.value("Z_delta", p.Z_delta);
    p.M_alpha = j.value("M_alpha", p.M_alpha);
    p.M_q = j.value("M_q", p.M_q);
    p.M_delta = j.value("M_delta", p.M_delta);
    p.tau_s = j.value("tau_s", p.tau_s);
    p.h = j.value("h", p.h);
    p.delta_M_alpha = j.value("delta_M_alpha", p.delta_M_alpha);
    return p;
}

void StateSpaceModel::validate() const {
    const Eigen::Index nx = A.rows();
    if (A.cols() != nx) throw DimensionMismatch("StateSpaceModel: A not square");
    if (B.rows() != nx) throw DimensionMismatch("StateSpaceModel: B rows != n");
    if (C.cols() != nx) throw DimensionMismatch("StateSpaceModel: C cols != n");
    if (D.rows() != C.rows() || D.cols() != B.cols())
        throw DimensionMismatch("StateSpaceModel: D shape mismatch");
    if (Gamma.size() != 0 && Gamma.rows() != nx)
        throw DimensionMismatch("StateSpaceModel: Gamma rows != n");
    if (ref_input.size() != 0 && ref_input.rows() != nx)
        throw DimensionMismatch("StateSpaceModel: ref_input rows != n");
}

TransferFunction TransferFunction::normalized() const {
    const Polynomial d = den.trimmed();
    if (d.leading() == 0.0)
        throw InvalidParams("TransferFunction: zero denominator");
    TransferFunction out;
    out.den = d.monic();
    out.num = num.trimmed() * (1.0 / d.leading());
    return out;
}

StateSpaceModel build_missile_model(const MissileParams& p) {
    p.validate();

    StateSpaceModel sys;
    sys.A.resize(3, 3);
    sys.A << p.Z_alpha, 1.0, p.Z_delta,
             p.M_alpha + p.delta_M_alpha, p.M_q, p.M_delta,
             0.0, p.h / p.tau_s, -1.0 / p.tau_s;
    sys.B.resize(3, 1);
    sys.B << 0.0, 0.0, 1.0 / p.tau_s;
    sys.C.resize(1, 3);
    sys.C << 1.0, 0.0, 0.0;
    sys.D = Matrix::Zero(1, 1);
    sys.Gamma.resize(3, 1);
    sys.Gamma << 0.0, 0.0, 1.0;
    sys.state_labels = {"alpha", "pitch_rate", "delta"};
    return sys;
}

std::pair<int, int> reachability_ranks(const StateSpaceModel& sys) {
    sys.validate();
    const Eigen::Index n = sys.n();

    Matrix ctrl(n, n * sys.B.cols());
    Matrix block = sys.B;
    for (Eigen::Index k = 0; k < n; ++k) {
        ctrl.middleCols(k * sys.B.cols(), sys.B.cols()) = block;
        block = sys.A * block;
    }

    Matrix obs(n * sys.C.rows(), n);
    Matrix row = sys.C;
    for (Eigen::Index k = 0; k < n; ++k) {
        obs.middleRows(k * sys.C.rows(), sys.C.rows()) = row;
        row = row * sys.A;
    }

    return {row_rank(ctrl), row_rank(obs.transpose())};
}

TransferFunction ss_to_tf(const StateSpaceModel& sys, int input_index,
                          int output_index) {
    sys.validate();
    if (input_index < 0 || input_index >= sys.B.cols() || output_index < 0 ||
        output_index >= sys.C.rows())
        throw NotSISO("ss_to_tf: invalid input/output selection");

    const Matrix b = sys.B.col(input_index);
    const Matrix c = sys.C.row(output_index);
    const double d = sys.D(output_index, input_index);

    const CharPoly cp = char_poly(sys.A);
    const Eigen::Index n = sys.n();

    // num(s) = c adj(sI - A) b + d * den(s); adj coefficient of s^(n-1-k)
    // is cp.resolvent[k], so num has degree n when d != 0, else n-1.
    std::vector<double> num(static_cast<std::size_t>(n) + 1, 0.0);
    for (Eigen::Index k = 0; k < n; ++k)
        num[static_cast<std::size_t>(k) + 1] = (c * cp.resolvent[static_cast<std::size_t>(k)] * b)(0, 0);
    if (d != 0.0)
        for (std::size_t i = 0; i < num.size(); ++i) num[i] += d * cp.poly.coeffs[i];

    TransferFunction tf;
    tf.num = Polynomial(std::move(num)).trimmed(1e-12);
    tf.den = cp.poly;
    return tf;
}

std::vector<Complex> system_zeros(const StateSpaceModel& sys) {
    if (!sys.is_siso()) throw NotSISO("system_zeros: SISO only");
    const TransferFunction tf = ss_to_tf(sys);
    if (tf.num.is_zero(1e-12))
        throw DegenerateNumerator("system_zeros: numerator identically zero");
    if (tf.num.trimmed().degree() < 1) return {};
    return poly_roots(tf.num);
}

StateSpaceModel augment_with_integrator(const StateSpaceModel& sys) {
    sys.validate();
    if (!sys.is_siso()) throw NotSISO("augment_with_integrator: SISO only");
    if (max_abs(sys.D) != 0.0)
        throw NotSISO("augment_with_integrator: plant must have D = 0");

    const Eigen::Index n = sys.n();
    StateSpaceModel aug;
    aug.A = Matrix::Zero(n + 1, n + 1);
    aug.A.topLeftCorner(n, n) = sys.A;
    aug.A.bottomLeftCorner(1, n) = -sys.C;
    aug.B = Matrix::Zero(n + 1, 1);
    aug.B.topRows(n) = sys.B;
    aug.C = Matrix::Zero(1, n + 1);
    aug.C.leftCols(n) = sys.C;
    aug.D = Matrix::Zero(1, 1);
    if (sys.Gamma.size() != 0) {
        aug.Gamma = Matrix::Zero(n + 1, sys.Gamma.cols());
        aug.Gamma.topRows(n) = sys.Gamma;
    }
    aug.ref_input = Matrix::Zero(n + 1, 1);
    aug.ref_input(n, 0) = 1.0;
    aug.state_labels = sys.state_labels;
    aug.state_labels.resize(static_cast<std::size_t>(n), "x");
    aug.state_labels.push_back("error_integral");
    return aug;
}

}  // namespace lqgltr
