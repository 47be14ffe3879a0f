#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "starcalc/separable.hpp"

using namespace starcalc;

namespace {

double grid_error(const SeparableFn& f, const std::function<complexd(double, double)>& ref,
                  int n = 10) {
    auto pts = cheb_points(f.domain(), n);
    double m = 0.0;
    for (double x : pts)
        for (double y : pts) m = std::max(m, std::abs(f.eval(x, y) - ref(x, y)));
    return m;
}

SeparableFn xy_product(Interval I) {
    // {(x, 1)} pointwise-times {(1, y)}
    auto f = SeparableFn::rank1(UnivariateFn::identity(I), UnivariateFn::constant(I, 1.0));
    auto g = SeparableFn::rank1(UnivariateFn::constant(I, 1.0), UnivariateFn::identity(I));
    return f.pointwise_mul(g);
}

}  // namespace

TEST_CASE("add with negated self vanishes on the probe grid") {
    Interval I(0.0, 1.0);
    std::mt19937_64 rng(5);
    auto f = oracles::random_separable(I, rng, 3);
    CHECK(grid_error(f.add(f.scale(-1.0)), [](double, double) { return complexd(0.0); }) < 1e-13);
}

TEST_CASE("pointwise_mul of x and y slots") {
    Interval I(0.0, 1.0);
    CHECK(grid_error(xy_product(I), [](double x, double y) { return complexd(x * y); }) < 1e-13);
}

TEST_CASE("rank bookkeeping under add") {
    Interval I(0.0, 1.0);
    auto f = SeparableFn::rank1(UnivariateFn::identity(I), UnivariateFn::constant(I, 1.0));
    auto g = SeparableFn::rank1(UnivariateFn::constant(I, 1.0), UnivariateFn::identity(I));
    CHECK(f.add(g).rank() == 2);
}

TEST_CASE("algebra homomorphism on probes") {
    Interval I(-1.0, 2.0);
    std::mt19937_64 rng(17);
    auto f = oracles::random_separable(I, rng, 2);
    auto g = oracles::random_separable(I, rng, 2);
    auto pts = cheb_points(I, 20);
    double scale = 1.0 + f.probe_sup() + g.probe_sup();
    auto sum = f.add(g);
    auto prod = f.pointwise_mul(g);
    for (double x : pts)
        for (double y : pts) {
            CHECK(std::abs(sum.eval(x, y) - (f.eval(x, y) + g.eval(x, y))) < 1e-12 * scale);
            CHECK(std::abs(prod.eval(x, y) - f.eval(x, y) * g.eval(x, y)) <
                  1e-12 * scale * scale);
        }
}

TEST_CASE("partial derivative of x^2 * y") {
    Interval I(0.0, 1.0);
    auto x = UnivariateFn::identity(I);
    auto f = SeparableFn::rank1(x.mul(x), x);
    CHECK(grid_error(f.partial(1, 0), [](double x_, double y_) { return complexd(2 * x_ * y_); }) <
          1e-13);
    CHECK(grid_error(f.partial(0, 0), [](double x_, double y_) { return complexd(x_ * x_ * y_); }) <
          1e-14);
}

TEST_CASE("partial of exp(x)exp(-y) and commutation") {
    Interval I(0.0, 1.0);
    auto ex = interpolate([](double x) { return complexd(std::exp(x)); }, I, 24);
    auto emy = interpolate([](double y) { return complexd(std::exp(-y)); }, I, 24);
    auto f = SeparableFn::rank1(ex, emy);
    CHECK(grid_error(f.partial(1, 1),
                     [](double x, double y) { return complexd(-std::exp(x - y)); }) < 1e-11);

    std::mt19937_64 rng(23);
    auto g = oracles::random_separable(I, rng, 2, 4);
    auto lhs = g.partial(1, 0).partial(0, 1);
    auto rhs = g.partial(1, 1);
    auto pts = cheb_points(I, 15);
    for (double x : pts)
        for (double y : pts)
            CHECK(std::abs(lhs.eval(x, y) - rhs.eval(x, y)) < 1e-11 * (1.0 + rhs.probe_sup()));
}

TEST_CASE("diag traces") {
    Interval I(0.0, 1.0);
    auto x = UnivariateFn::identity(I);
    auto f = SeparableFn::rank1(x, x);
    auto d = f.diag();
    auto pts = cheb_points(I, 50);
    for (double p : pts) CHECK(std::abs(d.eval(p) - complexd(p * p)) < 1e-14);

    CHECK(SeparableFn::zero(I).diag().probe_sup() == 0.0);

    auto ex = interpolate([](double t) { return complexd(std::exp(t)); }, I, 24);
    auto emy = interpolate([](double t) { return complexd(std::exp(-t)); }, I, 24);
    auto one = SeparableFn::rank1(ex, emy).diag();
    for (double p : pts) CHECK(std::abs(one.eval(p) - complexd(1.0)) < 1e-12);
}

TEST_CASE("freeze") {
    Interval I(0.0, 1.0);
    auto x = UnivariateFn::identity(I);
    auto f = SeparableFn::rank1(x, x);  // x * y
    auto fx = f.freeze(SeparableFn::Slot::x);
    CHECK(grid_error(fx, [](double, double y) { return complexd(y * y); }) < 1e-14);
    auto fy = f.freeze(SeparableFn::Slot::y);
    CHECK(grid_error(fy, [](double x_, double) { return complexd(x_ * x_); }) < 1e-14);

    std::mt19937_64 rng(29);
    auto g = oracles::random_separable(I, rng, 2);
    auto frozen = g.freeze(SeparableFn::Slot::x);
    auto d = g.diag();
    auto pts = cheb_points(I, 20);
    for (double x_ : pts)
        for (double y_ : pts)
            CHECK(std::abs(frozen.eval(x_, y_) - d.eval(y_)) < 1e-12 * (1.0 + d.probe_sup()));
}

TEST_CASE("compress merges duplicated terms") {
    Interval I(0.0, 1.0);
    auto x = UnivariateFn::identity(I);
    auto one = UnivariateFn::constant(I, 1.0);
    SeparableFn f(I, {{x, one}, {x, one}});
    auto g = f.compress(1e-12);
    CHECK(g.rank() == 1);
    CHECK(grid_error(g, [](double x_, double) { return complexd(2 * x_); }) < 1e-13);
}

TEST_CASE("compress with tol 0 is lossless on probes") {
    Interval I(0.0, 1.0);
    std::mt19937_64 rng(31);
    auto f = oracles::random_separable(I, rng, 4);
    auto g = f.compress(0.0);
    CHECK(g.rank() <= f.rank());
    auto pts = cheb_points(I, 30);
    for (double x : pts)
        for (double y : pts)
            CHECK(std::abs(f.eval(x, y) - g.eval(x, y)) < 1e-12 * (1.0 + f.probe_sup()));
}

TEST_CASE("compress recovers a known low-rank ground truth") {
    Interval I(0.0, 1.0);
    std::mt19937_64 rng(37);
    auto truth = oracles::random_separable(I, rng, 3, 4);
    // Build a rank-8 representation of the same function by splitting terms.
    std::vector<SeparableFn::Term> ts;
    for (const auto& t : truth.terms()) {
        ts.push_back({t.a.scale(0.3), t.b});
        ts.push_back({t.a.scale(0.7), t.b});
    }
    std::mt19937_64 rng2(38);
    auto junk = oracles::random_separable(I, rng2, 2);
    ts.push_back({junk.terms()[0].a.scale(1e-13), junk.terms()[0].b});
    ts.push_back({junk.terms()[1].a.scale(1e-13), junk.terms()[1].b});
    SeparableFn fat(I, std::move(ts));
    REQUIRE(fat.rank() == 8);
    auto slim = fat.compress(1e-11);
    CHECK(slim.rank() == 3);
    auto pts = cheb_points(I, 20);
    for (double x : pts)
        for (double y : pts)
            CHECK(std::abs(slim.eval(x, y) - truth.eval(x, y)) < 1e-10 * (1.0 + truth.probe_sup()));
}

TEST_CASE("compress never increases rank and is deterministic") {
    Interval I(0.0, 1.0);
    std::mt19937_64 rng(41);
    for (int t = 0; t < 5; ++t) {
        auto f = oracles::random_separable(I, rng, 4);
        auto g1 = f.compress(1e-10);
        auto g2 = f.compress(1e-10);
        CHECK(g1.rank() <= f.rank());
        REQUIRE(g1.rank() == g2.rank());
        for (int i = 0; i < g1.rank(); ++i) {
            CHECK(g1.terms()[i].a.coeffs() == g2.terms()[i].a.coeffs());
            CHECK(g1.terms()[i].b.coeffs() == g2.terms()[i].b.coeffs());
        }
    }
}
