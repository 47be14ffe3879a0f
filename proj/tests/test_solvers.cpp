#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "starcalc/actions.hpp"
#include "starcalc/solvers.hpp"

using namespace starcalc;

namespace {

const Interval I01(0.0, 1.0);

// Fixed-step RK4 reference for V' = A(t)V integrated from y to x, V(y) = Id.
Eigen::MatrixXcd rk4_reference(const std::function<Eigen::MatrixXcd(double)>& A, int r,
                               double y, double x, int steps) {
    Eigen::MatrixXcd V = Eigen::MatrixXcd::Identity(r, r);
    const double h = (x - y) / steps;
    double t = y;
    for (int q = 0; q < steps; ++q) {
        auto A1 = A(t), A2 = A(t + 0.5 * h), A4 = A(t + h);
        Eigen::MatrixXcd k1 = A1 * V;
        Eigen::MatrixXcd k2 = A2 * (V + 0.5 * h * k1);
        Eigen::MatrixXcd k3 = A2 * (V + 0.5 * h * k2);
        Eigen::MatrixXcd k4 = A4 * (V + h * k3);
        V = V + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += h;
    }
    return V;
}

std::vector<std::vector<UnivariateFn>> scalar_system(const UnivariateFn& a) {
    return {{a}};
}

}  // namespace

TEST_CASE("solve_volterra2 with K = 1, g = 1 gives exp") {
    VolterraProblem p{SeparableFn::constant(I01, 1.0), UnivariateFn::constant(I01, 1.0)};
    auto s = solve_volterra2(p, 1e-9);
    CHECK(s.residual < 1e-9);
    CHECK(std::abs(s.u.eval(1.0) - complexd(std::exp(1.0))) < 1e-8);
    for (double x : cheb_points(I01, 12))
        CHECK(std::abs(s.u.eval(x) - complexd(std::exp(x))) < 1e-8);
}

TEST_CASE("solve_volterra2 with a zero kernel returns the forcing") {
    std::mt19937_64 rng(601);
    auto g = oracles::random_poly(I01, rng, 4);
    VolterraProblem p{SeparableFn::zero(I01), g};
    auto s = solve_volterra2(p, 1e-12);
    CHECK(s.residual == 0.0);
    for (double x : cheb_points(I01, 10)) CHECK(s.u.eval(x) == g.eval(x));
}

TEST_CASE("solve_volterra2 with K = -(x - y), g = x recovers sin") {
    auto x = UnivariateFn::identity(I01);
    auto one = UnivariateFn::constant(I01, 1.0);
    SeparableFn K(I01, {{x.scale(-1.0), one}, {one, x}});
    VolterraProblem p{K, x};
    auto s = solve_volterra2(p, 1e-8);
    CHECK(s.residual < 1e-8);
    for (double t : cheb_points(I01, 12))
        CHECK(std::abs(s.u.eval(t) - complexd(std::sin(t))) < 1e-8);
}

TEST_CASE("time_ordered_exp of a constant scalar") {
    auto toe = time_ordered_exp(scalar_system(UnivariateFn::constant(I01, 0.7)));
    for (double x : cheb_points(I01, 9))
        for (double y : cheb_points(I01, 9))
            CHECK(std::abs(toe.eval(x, y)(0, 0) - complexd(std::exp(0.7 * (x - y)))) < 1e-10);
}

TEST_CASE("time_ordered_exp of A = x") {
    auto toe = time_ordered_exp(scalar_system(UnivariateFn::identity(I01)));
    for (double x : cheb_points(I01, 9))
        for (double y : cheb_points(I01, 9))
            CHECK(std::abs(toe.eval(x, y)(0, 0) -
                           complexd(std::exp(0.5 * (x * x - y * y)))) < 1e-9);
}

TEST_CASE("time_ordered_exp of the rotation generator") {
    const double w = 2.0;
    auto zero = UnivariateFn::constant(I01, 0.0);
    std::vector<std::vector<UnivariateFn>> A = {
        {zero, UnivariateFn::constant(I01, 1.0)},
        {UnivariateFn::constant(I01, -w * w), zero}};
    auto toe = time_ordered_exp(A);
    for (double x : cheb_points(I01, 7))
        for (double y : cheb_points(I01, 7)) {
            const double t = x - y;
            Eigen::MatrixXcd ref(2, 2);
            ref << std::cos(w * t), std::sin(w * t) / w, -w * std::sin(w * t),
                std::cos(w * t);
            CHECK((toe.eval(x, y) - ref).cwiseAbs().maxCoeff() < 1e-8);
        }
}

TEST_CASE("time_ordered_exp of a non-commuting system vs an RK4 reference") {
    auto zero = UnivariateFn::constant(I01, 0.0);
    std::vector<std::vector<UnivariateFn>> A = {
        {zero, UnivariateFn::identity(I01)}, {UnivariateFn::constant(I01, 1.0), zero}};
    auto toe = time_ordered_exp(A);
    auto coeff = [](double t) {
        Eigen::MatrixXcd m(2, 2);
        m << 0.0, t, 1.0, 0.0;
        return m;
    };
    std::mt19937_64 rng(607);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 10; ++t) {
        double y = u(rng), x = u(rng);
        if (x < y) std::swap(x, y);
        Eigen::MatrixXcd ref = rk4_reference(coeff, 2, y, x, 1 << 16);
        CHECK((toe.eval(x, y) - ref).cwiseAbs().maxCoeff() < 1e-6);
    }
}

TEST_CASE("flow property and exact identity on the diagonal") {
    auto zero = UnivariateFn::constant(I01, 0.0);
    std::vector<std::vector<UnivariateFn>> A = {
        {zero, UnivariateFn::identity(I01)}, {UnivariateFn::constant(I01, 1.0), zero}};
    auto toe = time_ordered_exp(A);
    for (double x : {1.0, 0.8, 0.55})
        CHECK((toe.eval(x, x) - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() ==
              0.0);
    auto pts = cheb_points(I01, 6);
    for (double x : pts)
        for (double y : pts)
            for (double z : pts) {
                if (!(x >= y && y >= z)) continue;
                Eigen::MatrixXcd lhs = toe.eval(x, y) * toe.eval(y, z);
                CHECK((lhs - toe.eval(x, z)).cwiseAbs().maxCoeff() < 1e-8);
            }
}

TEST_CASE("star resolvent identity (delta Id - A Theta) star U_Theta = Theta Id") {
    auto zero = UnivariateFn::constant(I01, 0.0);
    auto one = UnivariateFn::constant(I01, 1.0);
    std::vector<std::vector<UnivariateFn>> A = {
        {zero, UnivariateFn::identity(I01)}, {one, zero}};
    auto toe = time_ordered_exp(A);

    MatrixStarElement lhs = MatrixStarElement::identity(2, I01);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            // the coefficient lives in the integration slot: the product
            // (A Theta star U Theta)(x,y) must integrate A(tau) U(tau,y)
            lhs.at(i, j) = lhs.at(i, j).sub(smooth_part(SeparableFn::rank1(one, A[i][j])));
    MatrixStarElement prod = star_matrix_mul(lhs, toe.kernel());
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            StarElement expect =
                (i == j) ? delta(-1, I01) : StarElement(I01);
            CHECK(action_residual(prod.at(i, j), expect, 8) < 1e-8);
        }
}

TEST_CASE("Neumann series oracle truncated at n = 12") {
    // entries scaled small so the geometric tail is negligible
    auto zero = UnivariateFn::constant(I01, 0.0);
    auto one = UnivariateFn::constant(I01, 1.0);
    std::vector<std::vector<UnivariateFn>> A = {
        {zero, UnivariateFn::identity(I01).scale(0.4)}, {one.scale(0.3), zero}};
    auto toe = time_ordered_exp(A);

    MatrixStarElement M(2, I01);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            M.at(i, j) = smooth_part(SeparableFn::rank1(one, A[i][j]));
    MatrixStarElement theta_id(2, I01);
    for (int i = 0; i < 2; ++i) theta_id.at(i, i) = delta(-1, I01);

    MatrixStarElement acc = theta_id;
    MatrixStarElement term = theta_id;
    for (int n = 1; n <= 12; ++n) {
        term = star_matrix_mul(M, term);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) acc.at(i, j) = acc.at(i, j).add(term.at(i, j));
    }
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(action_residual(acc.at(i, j), toe.kernel().at(i, j), 8) < 1e-8);
}

TEST_CASE("star_matrix_mul unit, associativity and the scalar reduction") {
    std::mt19937_64 rng(613);
    auto rand_mat = [&] {
        MatrixStarElement m(2, I01);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                m.at(i, j) = smooth_part(oracles::random_separable(I01, rng, 1, 2));
        return m;
    };
    auto D = rand_mat(), E = rand_mat(), F = rand_mat();
    auto Id = MatrixStarElement::identity(2, I01);
    auto DI = star_matrix_mul(D, Id);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(action_residual(DI.at(i, j), D.at(i, j), 6) < 1e-12);

    auto L = star_matrix_mul(star_matrix_mul(D, E), F);
    auto R = star_matrix_mul(D, star_matrix_mul(E, F));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(action_residual(L.at(i, j), R.at(i, j), 6) < 1e-7);

    MatrixStarElement a(1, I01), b(1, I01);
    a.at(0, 0) = smooth_part(oracles::random_separable(I01, rng, 2, 2));
    b.at(0, 0) = smooth_part(oracles::random_separable(I01, rng, 2, 2));
    auto ab = star_matrix_mul(a, b);
    CHECK(action_residual(ab.at(0, 0), star(a.at(0, 0), b.at(0, 0)), 6) < 1e-12);
}

TEST_CASE("validation errors") {
    CHECK_THROWS_AS(MatrixStarElement(0, I01), std::invalid_argument);
    MatrixStarElement a(2, I01), b(3, I01);
    CHECK_THROWS_AS(star_matrix_mul(a, b), std::invalid_argument);
    VolterraProblem p{SeparableFn::constant(Interval(0.0, 2.0), 1.0),
                     UnivariateFn::constant(I01, 1.0)};
    CHECK_THROWS_AS(solve_volterra2(p), std::invalid_argument);
    CHECK_THROWS_AS(time_ordered_exp({}), std::invalid_argument);
}
