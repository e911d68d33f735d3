#include <doctest.h>

#include <random>

#include "lqgltr/riccati.hpp"
#include "test_helpers.hpp"

using namespace lqgltr;

namespace {

// Test-local closed-loop regulator cost, integrated with RK4. Deliberately
// independent of the sim module.
double simulated_lqr_cost(const Matrix& A, const Matrix& B, const Matrix& Q,
                          double R, const Matrix& K, const Vector& x0,
                          double horizon) {
    const double dt = 1e-4;
    const Matrix Acl = A - B * K;
    Vector x = x0;
    std::vector<double> integrand;
    const auto cost = [&](const Vector& z) {
        const double u = (-K * z)(0);
        return (z.transpose() * Q * z)(0) + R * u * u;
    };
    integrand.push_back(cost(x));
    const auto steps = static_cast<std::size_t>(horizon / dt);
    for (std::size_t k = 0; k < steps; ++k) {
        const Vector k1 = Acl * x;
        const Vector k2 = Acl * (x + 0.5 * dt * k1);
        const Vector k3 = Acl * (x + 0.5 * dt * k2);
        const Vector k4 = Acl * (x + dt * k3);
        x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        integrand.push_back(cost(x));
    }
    return trapezoid(integrand, dt);
}

}  // namespace

TEST_SUITE("riccati") {
    TEST_CASE("stabilizing_gain: double integrator, poles {-1,-2} -> [2, 3]") {
        Matrix A = Matrix::Zero(2, 2);
        A(0, 1) = 1.0;
        Matrix B = Matrix::Zero(2, 1);
        B(1, 0) = 1.0;
        const std::vector<Complex> poles{{-1.0, 0.0}, {-2.0, 0.0}};
        const Matrix K = stabilizing_gain(A, B, poles);
        CHECK(K(0, 0) == doctest::Approx(2.0));
        CHECK(K(0, 1) == doctest::Approx(3.0));
    }

    TEST_CASE("stabilizing_gain: matching request gives zero gain") {
        Matrix A = Matrix::Zero(2, 2);
        A.diagonal() << -1.0, -2.0;
        Matrix B(2, 1);
        B << 1.0, 1.0;
        const std::vector<Complex> poles{{-1.0, 0.0}, {-2.0, 0.0}};
        const Matrix K = stabilizing_gain(A, B, poles);
        CHECK(max_abs(K) < 1e-10);  // phi_d(A) = 0 by Cayley-Hamilton
    }

    TEST_CASE("stabilizing_gain: places nominal missile poles") {
        const StateSpaceModel sys = test_helpers::nominal_missile();
        const std::vector<Complex> poles{{-2.0, 0.0}, {-3.0, 0.0}, {-4.0, 0.0}};
        const Matrix K = stabilizing_gain(sys.A, sys.B, poles);
        CHECK(test_helpers::multiset_distance(eigenvalues(sys.A - sys.B * K),
                                              poles) < 1e-6);
    }

    TEST_CASE("stabilizing_gain: uncontrollable pair throws") {
        Matrix A = Matrix::Zero(2, 2);
        Matrix B = Matrix::Zero(2, 1);
        B(0, 0) = 1.0;
        const std::vector<Complex> poles{{-1.0, 0.0}, {-2.0, 0.0}};
        CHECK_THROWS_AS(stabilizing_gain(A, B, poles), Uncontrollable);
    }

    TEST_CASE("solve_care: scalar cases") {
        CHECK(solve_care(Matrix::Zero(1, 1), Matrix::Identity(1, 1),
                         Matrix::Identity(1, 1), 1.0)(0, 0) ==
              doctest::Approx(1.0));
        CHECK(solve_care(-Matrix::Identity(1, 1), Matrix::Identity(1, 1),
                         Matrix::Zero(1, 1), 1.0)(0, 0) ==
              doctest::Approx(0.0).epsilon(1e-9));
    }

    TEST_CASE("solve_care: nominal missile at the heuristic design weights") {
        const StateSpaceModel sys = test_helpers::nominal_missile();
        const Matrix Q = 0.01 * Matrix::Identity(3, 3);
        const double R = 0.01;
        const Matrix P = solve_care(sys.A, sys.B, Q, R);
        const Matrix residual = sys.A.transpose() * P + P * sys.A -
                                P * sys.B * sys.B.transpose() * P / R + Q;
        CHECK(max_abs(residual) <= 1e-8 * (1.0 + max_abs(P)));
        const Matrix K = (sys.B.transpose() * P) / R;
        CHECK(is_hurwitz(sys.A - sys.B * K));
    }

    TEST_CASE("solve_care: Newton-Kleinman iterates decrease in PSD order") {
        const StateSpaceModel sys = test_helpers::nominal_missile();
        std::vector<Matrix> trace;
        solve_care(sys.A, sys.B, Matrix::Identity(3, 3), 0.5, &trace);
        REQUIRE(trace.size() >= 2);
        for (std::size_t k = 0; k + 1 < trace.size(); ++k) {
            const Matrix diff = trace[k] - trace[k + 1];
            for (const Complex& ev : eigenvalues(diff))
                CHECK(ev.real() >= -1e-8 * (1.0 + max_abs(trace[k])));
        }
    }

    TEST_CASE("solve_care: matches the Hamiltonian oracle on random systems") {
        std::mt19937 rng(29);
        for (int trial = 0; trial < 20; ++trial) {
            const StateSpaceModel sys = test_helpers::random_siso(rng, 3);
            const Matrix Q = Matrix::Identity(3, 3);
            const Matrix P = solve_care(sys.A, sys.B, Q, 1.0);
            const Matrix P_oracle =
                test_helpers::care_hamiltonian_oracle(sys.A, sys.B, Q, 1.0);
            CHECK(max_abs(P - P_oracle) <= 1e-6 * (1.0 + max_abs(P)));
        }
    }

    TEST_CASE("lqr_gain: scalar and scaling identity") {
        StateSpaceModel sys;
        sys.A = Matrix::Zero(1, 1);
        sys.B = Matrix::Identity(1, 1);
        sys.C = Matrix::Identity(1, 1);
        sys.D = Matrix::Zero(1, 1);
        CHECK(lqr_gain(sys, {Matrix::Identity(1, 1), 1.0})(0, 0) ==
              doctest::Approx(1.0));

        const StateSpaceModel missile = test_helpers::nominal_missile();
        const Matrix K1 = lqr_gain(missile, {Matrix::Identity(3, 3), 0.7});
        const Matrix K2 = lqr_gain(missile, {2.0 * Matrix::Identity(3, 3), 1.4});
        CHECK(max_abs(K1 - K2) <= 1e-7 * (1.0 + max_abs(K1)));
    }

    TEST_CASE("lqr_gain: optimal cost matches simulated cost within 1%") {
        const StateSpaceModel sys = test_helpers::nominal_missile();
        const WeightSpec w{0.01 * Matrix::Identity(3, 3), 0.01};
        const Matrix K = lqr_gain(sys, w);
        const Matrix P = solve_care(sys.A, sys.B, w.Q, w.R);
        Vector x0(3);
        x0 << 1.0, 0.0, 0.0;
        const double predicted = x0.transpose() * P * x0;
        const double simulated =
            simulated_lqr_cost(sys.A, sys.B, w.Q, w.R, K, x0, 40.0);
        CHECK(simulated == doctest::Approx(predicted).epsilon(0.01));
    }

    TEST_CASE("kalman_gain: scalar dual of the scalar ARE") {
        StateSpaceModel sys;
        sys.A = Matrix::Zero(1, 1);
        sys.B = Matrix::Identity(1, 1);
        sys.C = Matrix::Identity(1, 1);
        sys.D = Matrix::Zero(1, 1);
        sys.Gamma = Matrix::Identity(1, 1);
        const NoiseSpec noise{1.0, 1.0, 1.0};
        CHECK(kalman_gain(sys, noise)(0, 0) == doctest::Approx(1.0));
    }

    TEST_CASE("kalman_gain: q = 0 with stable plant gives zero gain") {
        const StateSpaceModel sys = test_helpers::nominal_missile();
        NoiseSpec noise;
        noise.q = 0.0;
        CHECK(max_abs(kalman_gain(sys, noise)) < 1e-8);
    }

    TEST_CASE("kalman_gain: norm strictly increasing in q at design point") {
        const StateSpaceModel sys = test_helpers::nominal_missile();
        double prev = -1.0;
        for (double q : {1.0, 10.0, 100.0, 1000.0}) {
            NoiseSpec noise;  // Xi = 1e-3, Theta = 1e-7
            noise.q = q;
            const double norm = kalman_gain(sys, noise).norm();
            CHECK(norm > prev);
            prev = norm;
        }
    }

    TEST_CASE("kalman_gain: equals transposed lqr machinery on the dual system") {
        std::mt19937 rng(31);
        for (int trial = 0; trial < 10; ++trial) {
            const StateSpaceModel sys = test_helpers::random_siso(rng, 3, true);
            NoiseSpec noise{0.5, 0.25, 4.0};
            const Matrix K_f = kalman_gain(sys, noise);

            StateSpaceModel dual;
            dual.A = sys.A.transpose();
            dual.B = sys.C.transpose();
            dual.C = sys.B.transpose();
            dual.D = Matrix::Zero(1, 1);
            const WeightSpec w{
                sys.Gamma * (noise.q * noise.Xi) * sys.Gamma.transpose(),
                noise.Theta};
            const Matrix K_dual = lqr_gain(dual, w);
            CHECK(max_abs(K_f - K_dual.transpose()) <=
                  1e-7 * (1.0 + max_abs(K_f)));
        }
    }

    TEST_CASE("CARE residual + PSD + Hurwitz on random systems") {
        std::mt19937 rng(37);
        for (int trial = 0; trial < 30; ++trial) {
            const int n = 2 + static_cast<int>(rng() % 4);  // 2..5
            const StateSpaceModel sys = test_helpers::random_siso(rng, n);
            const Matrix Q = Matrix::Identity(n, n);
            const double R = 0.5;
            const Matrix P = solve_care(sys.A, sys.B, Q, R);
            const Matrix residual = sys.A.transpose() * P + P * sys.A -
                                    P * sys.B * sys.B.transpose() * P / R + Q;
            CHECK(max_abs(residual) <= 1e-8 * (1.0 + max_abs(P)));
            CHECK(max_abs(P - P.transpose()) <= 1e-12 * (1.0 + max_abs(P)));
            for (const Complex& ev : eigenvalues(P))
                CHECK(ev.real() >= -1e-9 * (1.0 + max_abs(P)));
            const Matrix K = (sys.B.transpose() * P) / R;
            CHECK(is_hurwitz(sys.A - sys.B * K));
        }
    }

    TEST_CASE("spec validation errors") {
        const NoiseSpec zero_theta{1.0, 0.0, 1.0};
        CHECK_THROWS_AS(zero_theta.validate(), InvalidParams);
        const NoiseSpec negative_xi{-1.0, 1.0, 1.0};
        CHECK_THROWS_AS(negative_xi.validate(), InvalidParams);
        Matrix bad(2, 2);
        bad << 1.0, 0.0, 0.0, -1.0;
        const WeightSpec indefinite_q{bad, 1.0};
        CHECK_THROWS_AS(indefinite_q.validate(), InvalidParams);
        const WeightSpec zero_r{Matrix::Identity(2, 2), 0.0};
        CHECK_THROWS_AS(zero_r.validate(), InvalidParams);
    }
}
