#include <doctest.h>

#include "lqgltr/plant.hpp"
#include "test_helpers.hpp"

using namespace lqgltr;

TEST_SUITE("plant") {
    TEST_CASE("build_missile_model: nominal matrices are exact") {
        const StateSpaceModel sys = test_helpers::nominal_missile();
        Matrix A(3, 3);
        A << -2.7, 1.0, 0.27, -5.5, -0.4, -19.0, 0.0, 10.0, -20.0;
        CHECK(max_abs(sys.A - A) == 0.0);
        Matrix B(3, 1);
        B << 0.0, 0.0, 20.0;
        CHECK(max_abs(sys.B - B) == 0.0);
        CHECK(sys.C(0, 0) == 1.0);
        CHECK(sys.C(0, 1) == 0.0);
        CHECK(sys.C(0, 2) == 0.0);
        CHECK(max_abs(sys.D) == 0.0);
        CHECK(sys.Gamma(2, 0) == 1.0);
    }

    TEST_CASE("build_missile_model: h = 0 decouples the seeker row") {
        MissileParams p;
        p.h = 0.0;
        CHECK(build_missile_model(p).A(2, 1) == 0.0);
    }

    TEST_CASE("build_missile_model: delta_M_alpha enters A(1,0)") {
        MissileParams p;
        p.delta_M_alpha = 1.0;
        CHECK(build_missile_model(p).A(1, 0) == doctest::Approx(-4.5));
    }

    TEST_CASE("build_missile_model: rejects tau_s <= 0") {
        MissileParams p;
        p.tau_s = 0.0;
        CHECK_THROWS_AS(build_missile_model(p), InvalidParams);
    }

    TEST_CASE("MissileParams JSON round-trip and defaults") {
        MissileParams p;
        p.h = 0.07;
        p.delta_M_alpha = -0.5;
        const MissileParams q = MissileParams::from_json(p.to_json());
        CHECK(q.h == doctest::Approx(0.07));
        CHECK(q.delta_M_alpha == doctest::Approx(-0.5));
        CHECK(q.Z_alpha == doctest::Approx(-2.7));

        const MissileParams defaults = MissileParams::from_json("{}");
        CHECK(defaults.tau_s == doctest::Approx(0.05));
        CHECK(defaults.h == doctest::Approx(0.5));
        CHECK(defaults.delta_M_alpha == 0.0);
        CHECK(defaults.M_delta == doctest::Approx(-19.0));
    }

    TEST_CASE("reachability_ranks: nominal plant is (3, 3)") {
        CHECK(reachability_ranks(test_helpers::nominal_missile()) ==
              std::pair<int, int>{3, 3});
    }

    TEST_CASE("reachability_ranks: decoupled second state gives (1, 1)") {
        StateSpaceModel sys;
        sys.A = Matrix::Zero(2, 2);
        sys.B = Matrix::Zero(2, 1);
        sys.B(0, 0) = 1.0;
        sys.C = Matrix::Zero(1, 2);
        sys.C(0, 0) = 1.0;
        sys.D = Matrix::Zero(1, 1);
        CHECK(reachability_ranks(sys) == std::pair<int, int>{1, 1});
    }

    TEST_CASE("reachability_ranks: augmented nominal model") {
        const StateSpaceModel aug =
            augment_with_integrator(test_helpers::nominal_missile());
        // Fully controllable from u (the plant has no zero at the origin); the
        // error integral never feeds back into y, so it stays unobservable.
        CHECK(reachability_ranks(aug) == std::pair<int, int>{4, 3});
    }

    TEST_CASE("ss_to_tf: first-order lag") {
        StateSpaceModel sys;
        sys.A = Matrix::Constant(1, 1, -1.0);
        sys.B = Matrix::Constant(1, 1, 1.0);
        sys.C = Matrix::Constant(1, 1, 1.0);
        sys.D = Matrix::Zero(1, 1);
        const TransferFunction tf = ss_to_tf(sys);
        CHECK(tf.num.coeffs == std::vector<double>{1.0});
        CHECK(tf.den.coeffs == std::vector<double>{1.0, 1.0});
    }

    TEST_CASE("ss_to_tf: double integrator") {
        StateSpaceModel sys;
        sys.A = Matrix::Zero(2, 2);
        sys.A(0, 1) = 1.0;
        sys.B = Matrix::Zero(2, 1);
        sys.B(1, 0) = 1.0;
        sys.C = Matrix::Zero(1, 2);
        sys.C(0, 0) = 1.0;
        sys.D = Matrix::Zero(1, 1);
        const TransferFunction tf = ss_to_tf(sys);
        CHECK(tf.num.coeffs == std::vector<double>{1.0});
        CHECK(tf.den.coeffs == std::vector<double>{1.0, 0.0, 0.0});
    }

    TEST_CASE("ss_to_tf: agrees with pointwise resolvent on the missile") {
        const StateSpaceModel sys = test_helpers::nominal_missile();
        const TransferFunction tf = ss_to_tf(sys);
        const Complex s(1.0, 0.0);
        // direct resolvent: C (sI - A)^{-1} B via lu_solve
        Eigen::MatrixXcd M = (s * Matrix::Identity(3, 3) - sys.A).cast<Complex>();
        Eigen::MatrixXcd x = M.partialPivLu().solve(sys.B.cast<Complex>());
        const Complex direct = (sys.C.cast<Complex>() * x)(0, 0);
        CHECK(std::abs(tf.eval(s) - direct) <= 1e-9 * std::abs(direct));
    }

    TEST_CASE("ss_to_tf: matches resolvent at 20 random complex points") {
        std::mt19937 rng(23);
        const StateSpaceModel sys = test_helpers::random_siso(rng, 4);
        const TransferFunction tf = ss_to_tf(sys);
        std::uniform_real_distribution<double> re(-3.0, 3.0);
        std::uniform_real_distribution<double> im(0.1, 8.0);
        for (int k = 0; k < 20; ++k) {
            const Complex s(re(rng), im(rng));
            Eigen::MatrixXcd M = (s * Matrix::Identity(4, 4) - sys.A).cast<Complex>();
            Eigen::MatrixXcd x = M.partialPivLu().solve(sys.B.cast<Complex>());
            const Complex direct = (sys.C.cast<Complex>() * x)(0, 0);
            CHECK(std::abs(tf.eval(s) - direct) <= 1e-8 * std::abs(direct));
        }
    }

    TEST_CASE("system_zeros: nominal u->alpha channel is non-minimum phase") {
        const std::vector<Complex> zeros =
            system_zeros(test_helpers::nominal_missile());
        bool rhp = false;
        for (const Complex& z : zeros) rhp = rhp || z.real() > 0.0;
        CHECK(rhp);
    }

    TEST_CASE("system_zeros: first-order lag has no zeros") {
        StateSpaceModel sys;
        sys.A = Matrix::Constant(1, 1, -1.0);
        sys.B = Matrix::Constant(1, 1, 1.0);
        sys.C = Matrix::Constant(1, 1, 1.0);
        sys.D = Matrix::Zero(1, 1);
        CHECK(system_zeros(sys).empty());
    }

    TEST_CASE("system_zeros: values equal roots of the numerator") {
        const StateSpaceModel sys = test_helpers::nominal_missile();
        const TransferFunction tf = ss_to_tf(sys);
        CHECK(test_helpers::multiset_distance(system_zeros(sys),
                                              poly_roots(tf.num)) < 1e-12);
    }

    TEST_CASE("augment_with_integrator: structure and properties") {
        const StateSpaceModel sys = test_helpers::nominal_missile();
        const StateSpaceModel aug = augment_with_integrator(sys);
        REQUIRE(aug.n() == 4);
        CHECK(aug.A(3, 0) == -1.0);
        CHECK(aug.A(3, 1) == 0.0);
        CHECK(aug.A(3, 2) == 0.0);
        CHECK(aug.A(3, 3) == 0.0);
        CHECK(aug.ref_input(3, 0) == 1.0);

        // poles preserved: eig(A_aug) = eig(A) + {0}
        std::vector<Complex> expected = eigenvalues(sys.A);
        expected.emplace_back(0.0, 0.0);
        CHECK(test_helpers::multiset_distance(eigenvalues(aug.A), expected) < 1e-8);
    }

    TEST_CASE("augment_with_integrator: C = 0 degenerates to block triangular") {
        StateSpaceModel sys = test_helpers::nominal_missile();
        sys.C = Matrix::Zero(1, 3);
        const StateSpaceModel aug = augment_with_integrator(sys);
        const CharPoly aug_cp = char_poly(aug.A);
        const CharPoly cp = char_poly(sys.A);
        const Polynomial expect = cp.poly * Polynomial({1.0, 0.0});
        for (std::size_t i = 0; i < expect.coeffs.size(); ++i)
            CHECK(aug_cp.poly.coeffs[i] == doctest::Approx(expect.coeffs[i]));
    }
}
