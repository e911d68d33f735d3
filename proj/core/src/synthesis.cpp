#include "lqgltr/synthesis.hpp"

#include <json.hpp>

namespace lqgltr {

namespace {

nlohmann::json matrix_json(const Matrix& m) {
    std::vector<double> data;
    data.reserve(static_cast<std::size_t>(m.size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

const char* kind_name(ControllerKind k) {
    switch (k) {
        case ControllerKind::LqgRegulator: return "LQG_REGULATOR";
        case ControllerKind::LqgLtr: return "LQG_LTR";
        case ControllerKind::HybridServo: return "HYBRID_SERVO";
    }
    return "?";
}

}  // namespace

std::string ControllerRealization::to_json() const {
    const TransferFunction tf = controller_tf_1dof(*this).normalized();
    nlohmann::json j{
        {"kind", kind_name(kind)},
        {"input_names", input_names},
        {"A_k", matrix_json(A_k)},
        {"B_k", matrix_json(B_k)},
        {"C_k", matrix_json(C_k)},
        {"D_k", matrix_json(D_k)},
        {"tf_1dof", {{"num", tf.num.coeffs}, {"den", tf.den.coeffs}}},
    };
    return j.dump(2);
}

ControllerRealization lqg_controller(const StateSpaceModel& sys,
                                     const GainSet& gains) {
    sys.validate();
    if (max_abs(sys.D) != 0.0)
        throw DimensionMismatch("lqg_controller: plant must have D = 0");
    const Eigen::Index n = sys.n();
    if (gains.K_c.rows() != 1 || gains.K_c.cols() != n || gains.K_f.rows() != n ||
        gains.K_f.cols() != 1)
        throw DimensionMismatch("lqg_controller: gain dimensions do not match plant");

    ControllerRealization ctrl;
    ctrl.A_k = sys.A - sys.B * gains.K_c - gains.K_f * sys.C;
    ctrl.B_k = gains.K_f;
    ctrl.C_k = gains.K_c;
    ctrl.D_k = Matrix::Zero(1, 1);
    ctrl.kind = gains.noise.q == 1.0 ? ControllerKind::LqgRegulator
                                     : ControllerKind::LqgLtr;
    ctrl.input_names = {"y"};
    ctrl.gains = gains;
    return ctrl;
}

TransferFunction open_loop_tf(const StateSpaceModel& sys, const GainSet& gains,
                              LoopKind mode) {
    sys.validate();
    if (!sys.is_siso()) throw NotSISO("open_loop_tf: SISO only");
    const Eigen::Index n = sys.n();

    if (mode == LoopKind::LQR) {
        StateSpaceModel loop;
        loop.A = sys.A;
        loop.B = sys.B;
        loop.C = gains.K_c;
        loop.D = Matrix::Zero(1, 1);
        return ss_to_tf(loop);
    }

    const Matrix X = sys.A - sys.B * gains.K_c - gains.K_f * sys.C;
    StateSpaceModel series;
    series.A = Matrix::Zero(2 * n, 2 * n);
    series.A.topLeftCorner(n, n) = sys.A;
    series.A.bottomLeftCorner(n, n) = gains.K_f * sys.C;
    series.A.bottomRightCorner(n, n) = X;
    series.B = Matrix::Zero(2 * n, 1);
    series.B.topRows(n) = sys.B;
    series.C = Matrix::Zero(1, 2 * n);
    series.C.rightCols(n) = gains.K_c;
    series.D = Matrix::Zero(1, 1);
    return ss_to_tf(series);
}

std::pair<Matrix, Matrix> lqi_gains(const StateSpaceModel& sys,
                                    const WeightSpec& weights, double Q_i) {
    if (!(Q_i > 0.0)) throw InvalidParams("lqi_gains: Q_i must be > 0");
    const StateSpaceModel aug = augment_with_integrator(sys);
    const Eigen::Index n = sys.n();

    WeightSpec aug_weights;
    aug_weights.Q = Matrix::Zero(n + 1, n + 1);
    aug_weights.Q.topLeftCorner(n, n) = weights.Q;
    aug_weights.Q(n, n) = Q_i;
    aug_weights.R = weights.R;

    const Matrix K = lqr_gain(aug, aug_weights);
    return {K.leftCols(n), K.rightCols(1)};
}

ControllerRealization servo_controller(const StateSpaceModel& sys,
                                       const GainSet& gains) {
    sys.validate();
    if (!gains.K_i.has_value())
        throw MissingIntegralGain("servo_controller: GainSet has no K_i");
    if (gains.K_f.size() == 0)
        throw MissingIntegralGain("servo_controller: GainSet has no K_f");
    const Eigen::Index n = sys.n();
    const Matrix& K_i = *gains.K_i;

    ControllerRealization ctrl;
    ctrl.A_k = Matrix::Zero(n + 1, n + 1);
    ctrl.A_k.topLeftCorner(n, n) =
        sys.A - sys.B * gains.K_c - gains.K_f * sys.C;
    ctrl.A_k.topRightCorner(n, 1) = -sys.B * K_i;
    // x_i row stays structurally zero: the integrator state.
    ctrl.B_k = Matrix::Zero(n + 1, 2);
    ctrl.B_k.block(0, 1, n, 1) = gains.K_f;  // y
    ctrl.B_k(n, 0) = 1.0;                    // r
    ctrl.B_k(n, 1) = -1.0;                   // -y
    ctrl.C_k = Matrix::Zero(1, n + 1);
    ctrl.C_k.leftCols(n) = -gains.K_c;
    ctrl.C_k.rightCols(1) = -K_i;
    ctrl.D_k = Matrix::Zero(1, 2);
    ctrl.kind = ControllerKind::HybridServo;
    ctrl.input_names = {"r", "y"};
    ctrl.gains = gains;
    return ctrl;
}

TransferFunction controller_tf_1dof(const ControllerRealization& ctrl) {
    StateSpaceModel one_dof;
    one_dof.A = ctrl.A_k;
    one_dof.D = Matrix::Zero(1, 1);
    if (ctrl.kind == ControllerKind::HybridServo) {
        one_dof.B = -ctrl.B_k.col(1);  // y = -e, r = 0
        one_dof.C = ctrl.C_k;
    } else {
        // Unity-loop e -> u of the observer-based controller: u = -C_k x_hat,
        // controller input y = -e; the two signs cancel into Eq.-11 form.
        one_dof.B = -ctrl.B_k;
        one_dof.C = -ctrl.C_k;
    }
    return ss_to_tf(one_dof);
}

TransferFunction open_loop_tf_1dof(const StateSpaceModel& sys,
                                   const ControllerRealization& ctrl) {
    sys.validate();
    if (!sys.is_siso()) throw NotSISO("open_loop_tf_1dof: SISO only");
    const Eigen::Index nc = ctrl.order();
    const Eigen::Index np = sys.n();

    Matrix B1, C1;
    if (ctrl.kind == ControllerKind::HybridServo) {
        B1 = -ctrl.B_k.col(1);
        C1 = ctrl.C_k;
    } else {
        B1 = -ctrl.B_k;
        C1 = -ctrl.C_k;
    }

    StateSpaceModel series;
    series.A = Matrix::Zero(nc + np, nc + np);
    series.A.topLeftCorner(nc, nc) = ctrl.A_k;
    series.A.bottomLeftCorner(np, nc) = sys.B * C1;
    series.A.bottomRightCorner(np, np) = sys.A;
    series.B = Matrix::Zero(nc + np, 1);
    series.B.topRows(nc) = B1;
    series.C = Matrix::Zero(1, nc + np);
    series.C.rightCols(np) = sys.C;
    series.D = Matrix::Zero(1, 1);
    return ss_to_tf(series);
}

ClosedLoop closed_loop(const StateSpaceModel& sys,
                       const ControllerRealization& ctrl) {
    sys.validate();
    if (!sys.is_siso()) throw NotSISO("closed_loop: SISO plant required");
    const Eigen::Index np = sys.n();
    const Eigen::Index nc = ctrl.order();
    if (ctrl.C_k.cols() != nc)
        throw DimensionMismatch("closed_loop: controller dimensions inconsistent");

    const bool servo = ctrl.kind == ControllerKind::HybridServo;
    if (servo && nc != np + 1)
        throw DimensionMismatch("closed_loop: servo controller order must be n+1");
    if (!servo && nc != np)
        throw DimensionMismatch("closed_loop: regulator order must equal plant order");

    // u = C_k x_c for the servo (output is u itself); u = -C_k x_c for the
    // regulator kinds (output is the feedback signal K_c x_hat).
    const Matrix u_row = servo ? ctrl.C_k : Matrix(-ctrl.C_k);
    const Matrix y_col = servo ? ctrl.B_k.col(1) : ctrl.B_k.col(0);
    const Matrix r_col = servo ? ctrl.B_k.col(0) : Matrix(Matrix::Zero(nc, 1));

    ClosedLoop loop;
    loop.A = Matrix::Zero(np + nc, np + nc);
    loop.A.topLeftCorner(np, np) = sys.A;
    loop.A.topRightCorner(np, nc) = sys.B * u_row;
    loop.A.bottomLeftCorner(nc, np) = y_col * sys.C;
    loop.A.bottomRightCorner(nc, nc) = ctrl.A_k;

    loop.E_r = Matrix::Zero(np + nc, 1);
    loop.E_r.bottomRows(nc) = r_col;
    loop.E_xi = Matrix::Zero(np + nc, 1);
    if (sys.Gamma.size() != 0) loop.E_xi.topRows(np) = sys.Gamma;
    loop.E_theta = Matrix::Zero(np + nc, 1);
    loop.E_theta.bottomRows(nc) = y_col;

    loop.C_y = Matrix::Zero(1, np + nc);
    loop.C_y.leftCols(np) = sys.C;
    loop.C_u = Matrix::Zero(1, np + nc);
    loop.C_u.rightCols(nc) = u_row;

    loop.n_plant = np;
    loop.estimator_offset = np;  // x_hat is the leading controller block
    loop.q_design = ctrl.gains.noise.q;
    loop.plant_labels = sys.state_labels;
    return loop;
}

}  // namespace lqgltr
