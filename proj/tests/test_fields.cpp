#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "agmonlab/fields.hpp"
#include "agmonlab/rng.hpp"
#include "oracles.hpp"

using namespace agml;

TEST_CASE("eval: built-in potentials") {
    Potential c = Potential::constant(3, 1.0);
    CHECK(c.eval(Vec3{0.3, -0.2, 0.0}) == 1.0);

    Potential q = Potential::radial_poly(3, {1.0, 0.0, 1.0}); // 1 + |x|^2
    CHECK(q.eval(Vec3{2, 0, 0}) == doctest::Approx(5.0).epsilon(1e-15));

    // below-one detection
    Potential bad = Potential::radial_poly(1, {0.5});
    CHECK_THROWS_AS((void)bad.eval(Vec3{0.0}), Error);
    try {
        (void)bad.eval(Vec3{0.0});
    } catch (const Error& e) {
        CHECK(e.code() == Errc::potential_below_one);
    }

    CHECK_THROWS_AS((void)q.eval(Vec3{std::nan(""), 0, 0}), Error);
}

TEST_CASE("eval: envelope checking") {
    // V = 1 + |x|^4 with (a, b, n) = (sqrt 2, 0, 2): a^2/2 |x|^4 - b = |x|^4 <= V
    Potential p = Potential::radial_poly(3, {1.0, 0.0, 0.0, 0.0, 1.0});
    Envelope env;
    env.a = std::sqrt(2.0);
    env.b = 0.0;
    env.n = 2.0;
    env.A = std::sqrt(2.0);
    env.B = 1.0;
    env.m = 2.0;
    p.set_envelope(env);
    for (double r : {0.0, 0.5, 1.0, 2.0, 3.7}) CHECK(p.eval(Vec3{r, 0, 0}) == doctest::Approx(1.0 + std::pow(r, 4)));

    // an envelope the potential violates at large |x|
    Potential tight = Potential::radial_poly(3, {1.0, 0.0, 1.0});
    Envelope bad;
    bad.a = 10.0;
    bad.n = 1.0;
    bad.A = 10.0;
    bad.B = 0.0;
    bad.m = 1.0;
    tight.set_envelope(bad);
    try {
        (void)tight.eval(Vec3{5, 0, 0}); // 26 < 50 |x|^2 - 0
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::envelope_violation);
    }
}

TEST_CASE("sup_ball: radial monotone exact form") {
    Potential q = Potential::radial_poly(3, {1.0, 0.0, 1.0});
    CHECK(sup_ball(q, Vec3{2, 0, 0}, 1.0) == doctest::Approx(10.0).epsilon(1e-14));
    Potential c = Potential::constant(3, 1.0);
    CHECK(sup_ball(c, Vec3{0.4, 0.1, -0.7}, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("sup_ball: non-radial sampling vs dense oracle") {
    // V = 1 + |x1|; sup over unit ball about 0 is 2 at (+-1, 0, 0)
    Potential p = Potential::coord_poly(3, {{1.0, {0, 0, 0}}, {1.0, {1, 0, 0}}});
    double est = sup_ball(p, Vec3{}, 1.0);
    // dense oracle: max of 1 + |x1| over the ball is attained on the x1 axis
    double dense = 0.0;
    for (double t = -1.0; t <= 1.0; t += 1e-3) dense = std::max(dense, 1.0 + std::fabs(t));
    CHECK(dense == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(est <= dense + 1e-12);
    CHECK(est == doctest::Approx(dense).epsilon(0.02));
}

TEST_CASE("sup_ball: dominates eval and is monotone in radius") {
    Potential p = Potential::coord_poly(3, {{1.0, {0, 0, 0}}, {0.5, {2, 1, 0}}});
    Rng rng(7);
    for (int i = 0; i < 25; ++i) {
        Vec3 x{rng.normal(), rng.normal(), rng.normal()};
        double r1 = 0.25 + rng.uniform(), r2 = r1 + rng.uniform();
        double s1 = sup_ball(p, x, r1), s2 = sup_ball(p, x, r2);
        CHECK(s1 >= p.eval(x) - 1e-12);
        CHECK(s2 >= s1 - 1e-9);
    }
}

TEST_CASE("ball_sup_potential wraps sup_ball") {
    Potential q = Potential::radial_poly(1, {1.0, 0.0, 0.5});
    Potential qc = ball_sup_potential(q, 1.0);
    // 1D radial nondecreasing: V_circ(x) = 1 + (|x|+1)^2/2
    for (double x : {0.0, 1.0, 2.5}) {
        CHECK(qc.eval(Vec3{x}) == doctest::Approx(1.0 + 0.5 * (x + 1.0) * (x + 1.0)).epsilon(1e-14));
    }
}

TEST_CASE("grid: node coordinates and snapping") {
    GridSpec g(3, Vec3{-2, -2, -2}, Vec3{2, 2, 2}, 0.5);
    CHECK(g.num_nodes() == 9 * 9 * 9);
    auto idx = g.snap(Vec3{1.0, 0.0, -0.5});
    CHECK(g.node_coord(idx)[0] == doctest::Approx(1.0));
    CHECK(g.node_coord(idx)[2] == doctest::Approx(-0.5));
    CHECK_THROWS_AS((void)g.snap(Vec3{5, 0, 0}), Error);
    // box must contain the origin
    CHECK_THROWS_AS(GridSpec(1, Vec3{1.0}, Vec3{2.0}, 0.1), Error);
    // negative spacing is a config error naming the field
    try {
        GridSpec(1, Vec3{-1.0}, Vec3{1.0}, -0.1);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::config_error);
        CHECK(std::string(e.what()).find("h") != std::string::npos);
    }
}

TEST_CASE("discretize") {
    Potential c = Potential::constant(2, 1.0);
    GridSpec g2(2, Vec3{-1, -1}, Vec3{1, 1}, 0.5);
    ScalarField f = discretize(c, g2);
    for (double v : f.values) CHECK(v == 1.0);

    Potential q1 = Potential::radial_poly(1, {1.0, 0.0, 1.0});
    GridSpec g1(1, Vec3{-1}, Vec3{1}, 1.0);
    ScalarField f1 = discretize(q1, g1);
    CHECK(f1.values[0] == doctest::Approx(2.0));
    CHECK(f1.values[1] == doctest::Approx(1.0));
    CHECK(f1.values[2] == doctest::Approx(2.0));

    Potential q3 = Potential::radial_poly(3, {1.0, 0.0, 1.0});
    GridSpec g3(3, Vec3{-2, -2, -2}, Vec3{2, 2, 2}, 1.0);
    ScalarField f3 = discretize(q3, g3);
    CHECK(f3.at(g3.snap(Vec3{1, 1, 1})) == doctest::Approx(4.0));
}

TEST_CASE("interp: multilinear") {
    Potential q = Potential::radial_poly(2, {1.0, 0.0, 1.0});
    GridSpec g(2, Vec3{-2, -2}, Vec3{2, 2}, 0.1);
    ScalarField f = discretize(q, g);
    // bilinear interpolation of a smooth field: O(h^2) accuracy (h^2/4 per axis here)
    CHECK(f.interp(Vec3{0.73, -0.41}) == doctest::Approx(1.0 + 0.73 * 0.73 + 0.41 * 0.41).epsilon(5e-3));
    CHECK_THROWS_AS((void)f.interp(Vec3{3, 0}), Error);
}

TEST_CASE("potential gradients are analytic") {
    Potential q = Potential::radial_poly(3, {1.0, 0.0, 1.0});
    Vec3 x{0.7, -0.3, 1.1};
    Vec3 g = q.grad(x);
    for (int a = 0; a < 3; ++a) CHECK(g[a] == doctest::Approx(2.0 * x[a]).epsilon(1e-12));

    Potential cp = Potential::coord_poly(2, {{1.0, {0, 0, 0}}, {2.0, {3, 1, 0}}});
    Vec3 y{0.8, 0.5, 0.0};
    Vec3 gc = cp.grad(y);
    CHECK(gc[0] == doctest::Approx(2.0 * 3.0 * 0.8 * 0.8 * 0.5).epsilon(1e-12));
    CHECK(gc[1] == doctest::Approx(2.0 * 0.8 * 0.8 * 0.8).epsilon(1e-12));
}
