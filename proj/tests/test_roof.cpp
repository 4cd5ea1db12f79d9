#include <doctest.h>

#include <cmath>

#include "ietlab/errors.hpp"
#include "ietlab/fixtures.hpp"
#include "ietlab/roof.hpp"
#include "oracles.hpp"

using namespace ietlab;

namespace {

Iet rot13() {
    return Iet(Permutation::from_labels({"A", "B"}, {"B", "A"}), {ExactScalar::rational(2, 3), ExactScalar::rational(1, 3)});
}

RoofSpec plus_at_zero(const Iet& T) {
    RoofSpec s = RoofSpec::constant(T.size(), 1.0);
    s.cplus[static_cast<std::size_t>(T.perm().top()[0])] = 1.0;
    return s;
}

}  // namespace

TEST_SUITE("roof") {

TEST_CASE("single singularity at 0") {
    const Iet T = rot13();
    const RoofSpec s = plus_at_zero(T);
    const ExactScalar half = ExactScalar::rational(1, 2);
    CHECK(eval_roof(s, T, half).value == doctest::Approx(1 + std::log(2.0)).epsilon(1e-15));
    CHECK(eval_roof_derivative(s, T, half).value == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(eval_roof_second_derivative(s, T, half).value == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(eval_roof(s, T, half).radius < 1e-30);
    CHECK_THROWS_AS(eval_roof(s, T, ExactScalar(0)), DomainError);
    RoofSpec bad = s;
    bad.cplus[0] = -1;
    CHECK_THROWS_AS(bad.validate(T), DomainError);
    CHECK_FALSE(RoofSpec::constant(2, 1.0).singular());
    CHECK(s.singular());
    CHECK(s.gap() == -1.0);
}

TEST_CASE("constant roof") {
    const Iet T = rot13();
    const RoofSpec s = RoofSpec::constant(2, 1.0);
    for (long k = 0; k < 10; ++k) CHECK(eval_roof(s, T, ExactScalar::rational(k, 10)).value == 1.0);
    const ExactScalar x = ExactScalar::rational(1, 7);
    CHECK(birkhoff_sum(s, T, x, 0).value == 0.0);
    CHECK(birkhoff_sum(s, T, x, 17).value == 17.0);
    CHECK(birkhoff_sum(s, T, x, -3).value == -3.0);
    const FlowPoint p = flow(s, T, FlowPoint{x, 0.0}, 2.5);
    CHECK(p.x == T(T(x)));
    CHECK(p.y == doctest::Approx(0.5));
    CHECK(discrete_iterations(s, T, x, 2.5) == 2);
    CHECK(discrete_iterations(s, T, x, 0.7) == 0);
    CHECK(discrete_iterations(s, T, x, 1.0) == 1);
    const FlowPoint q = flow(s, T, FlowPoint{x, 0.25}, 0.0);
    CHECK(q.x == x);
    CHECK(q.y == 0.25);
}

TEST_CASE("Birkhoff sums agree with direct summation") {
    const Iet G = golden_rotation();
    RoofSpec s = golden_roof(G);
    s.cplus[1] = 0.5;
    for (long k = 1; k < 6; ++k) {
        const ExactScalar x = G.total() * ExactScalar::rational(k, 7);
        CHECK(birkhoff_sum(s, G, x, 1).value == doctest::Approx(oracle::roof_direct(s, G, x)).epsilon(1e-14));
        for (long long r : {50LL, 400LL, -50LL, -400LL}) {
            for (int order : {0, 1}) {
                const Evaluation e = birkhoff_sum(s, G, x, r, order);
                const double d = oracle::birkhoff_direct(s, G, x, r, order);
                CHECK(e.value == doctest::Approx(d).epsilon(1e-12));
                CHECK(e.radius < 1e-20 * (1 + std::abs(e.value)));
            }
        }
        const auto cps = birkhoff_checkpoints(s, G, x, {10, 20, 20, 300});
        CHECK(cps[0].value == doctest::Approx(birkhoff_sum(s, G, x, 10).value).epsilon(1e-15));
        CHECK(cps[2].value == cps[1].value);
        CHECK(cps[3].value == doctest::Approx(birkhoff_sum(s, G, x, 300).value).epsilon(1e-15));
    }
    CHECK_THROWS_AS(birkhoff_checkpoints(s, G, G.total() / ExactScalar(3), {10, 5}), DomainError);
    CHECK_THROWS_AS(birkhoff_checkpoints(s, G, G.total() / ExactScalar(3), {10, -5}), DomainError);
}

TEST_CASE("cocycle identity of Birkhoff sums") {
    const Iet G = golden_rotation();
    const RoofSpec s = golden_roof(G);
    const ExactScalar x = G.total() * ExactScalar::rational(2, 9);
    ExactScalar y = x;
    for (int i = 0; i < 37; ++i) y = G(y);
    const double a = birkhoff_sum(s, G, x, 100).value;
    const double b = birkhoff_sum(s, G, x, 37).value + birkhoff_sum(s, G, y, 63).value;
    CHECK(a == doctest::Approx(b).epsilon(1e-14));
    // S_{-n}(x) = -S_n(T^{-n} x)
    ExactScalar z = x;
    for (int i = 0; i < 40; ++i) z = G.inverse()(z);
    CHECK(birkhoff_sum(s, G, x, -40).value == doctest::Approx(-birkhoff_sum(s, G, z, 40).value).epsilon(1e-14));
}

TEST_CASE("flow round trip and ergodic sanity") {
    const Iet G = golden_rotation();
    const RoofSpec s = golden_roof(G);
    for (long k = 1; k < 20; ++k) {
        const ExactScalar x = G.total() * ExactScalar::rational(k, 20);
        const double y = 0.3 * static_cast<double>(k % 3);
        for (double t : {3.7, 25.0, -11.5}) {
            const FlowPoint p = flow(s, G, FlowPoint{x, y}, t);
            FlowPoint q = flow(s, G, p, -t);
            // (x, f(x)) and (Tx, 0) are the same point of the suspension.
            const double fq = eval_roof(s, G, q.x).value;
            if (std::abs(q.y - fq) <= 1e-9) q = FlowPoint{G(q.x), q.y - fq};
            CHECK(std::abs((q.x - x).to_double()) <= 1e-9);
            CHECK(std::abs(q.y - y) <= 1e-9);
            CHECK(p.y >= 0);
            CHECK(p.y < eval_roof(s, G, p.x).value);
        }
        const double mean = roof_integral(s, G) / G.total().to_double();
        const long long r = discrete_iterations(s, G, x, 100.0);
        CHECK(std::abs(static_cast<double>(r) * mean - 100.0) <= 20.0);
    }
}

TEST_CASE("roof integral matches quadrature") {
    const Iet G = golden_rotation();
    RoofSpec s = golden_roof(G);
    CHECK(roof_integral(s, G) == doctest::Approx(oracle::roof_integral_quadrature(s, G)).epsilon(1e-10));
    s.cplus = {0.7, 1.3};
    s.cminus = {0.2, 0.0};
    s.c0 = 2.5;
    CHECK(roof_integral(s, G) == doctest::Approx(oracle::roof_integral_quadrature(s, G)).epsilon(1e-10));
    const Iet T = symmetric_three();
    RoofSpec t = RoofSpec::constant(3, 1.0);
    t.cminus = {1.0, 0.5, 0.25};
    CHECK(roof_integral(t, T) == doctest::Approx(oracle::roof_integral_quadrature(t, T)).epsilon(1e-10));
}

TEST_CASE("double-precision view matches the exact evaluation") {
    const Iet G = golden_rotation();
    RoofSpec s = golden_roof(G);
    s.cplus[1] = 0.5;
    const RoofView v(s, G);
    for (long k = 1; k < 100; ++k) {
        const ExactScalar x = G.total() * ExactScalar::rational(k, 100);
        CHECK(v.value(x.to_double()) == doctest::Approx(eval_roof(s, G, x).value).epsilon(1e-12));
    }
}

TEST_CASE("orbit points within the cutoff are reported with their index") {
    const Iet G = golden_rotation();
    RoofSpec s = golden_roof(G);
    s.cutoff = 1e-3;
    // Pull a point at distance 1e-4 left of r_A back by 5 steps.
    ExactScalar x = G.right(0) - ExactScalar::rational(1, 10000);
    for (int i = 0; i < 5; ++i) x = G.inverse()(x);
    try {
        (void)birkhoff_sum(s, G, x, 20);
        FAIL("expected SingularityTooClose");
    } catch (const SingularityTooClose& e) {
        CHECK(e.index == 5);
    }
}

}  // TEST_SUITE
