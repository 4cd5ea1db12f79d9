#include <doctest.h>

#include <cmath>

#include "ietlab/errors.hpp"
#include "ietlab/fixtures.hpp"
#include "ietlab/mixing.hpp"
#include "oracles.hpp"

using namespace ietlab;

namespace {

// Integral of g(x, f(x)) dx over every continuity interval, by quadrature.
double integrate_over_base(const RoofSpec& s, const Iet& T, const std::function<double(double, double)>& g) {
    double total = 0;
    for (std::size_t a = 0; a < T.size(); ++a) {
        const double l = T.left(static_cast<int>(a)).to_double(), r = T.right(static_cast<int>(a)).to_double();
        total += oracle::integrate([&](double x) {
            double f = s.c0;
            if (s.cplus[a] != 0) f -= s.cplus[a] * std::log(x - l);
            if (s.cminus[a] != 0) f -= s.cminus[a] * std::log(r - x);
            return g(x, f);
        }, l, r);
    }
    return total;
}

double bump_power_integral(int n) {
    return oracle::integrate([n](double u) { return std::pow(1 - u * u, 2 * n); }, -1.0, 1.0);
}

}  // namespace

TEST_SUITE("mixing") {

TEST_CASE("sampler matches the invariant measure") {
    const Iet G = golden_rotation();
    const RoofSpec s = golden_roof(G);
    const MixingProbe probe(s, G);
    const double area = oracle::roof_integral_quadrature(s, G);
    CHECK(probe.area() == doctest::Approx(area).epsilon(1e-10));
    const double ex = integrate_over_base(s, G, [](double x, double f) { return x * f; }) / area;
    const double ey = integrate_over_base(s, G, [](double, double f) { return f * f / 2; }) / area;
    const std::size_t n = 200000;
    double sx = 0, sy = 0, sx2 = 0, sy2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        auto [x, y] = probe.sample(5, i);
        REQUIRE(x >= 0.0);
        REQUIRE(x < G.total().to_double());
        sx += x;
        sy += y;
        sx2 += x * x;
        sy2 += y * y;
    }
    const double nn = static_cast<double>(n);
    const double se_x = std::sqrt((sx2 / nn - (sx / nn) * (sx / nn)) / nn);
    const double se_y = std::sqrt((sy2 / nn - (sy / nn) * (sy / nn)) / nn);
    CHECK(std::abs(sx / nn - ex) < 4 * se_x);
    CHECK(std::abs(sy / nn - ey) < 4 * se_y);
}

TEST_CASE("flow preserves the suspension") {
    const Iet G = golden_rotation();
    const MixingProbe probe(golden_roof(G), G);
    for (std::uint64_t i = 0; i < 200; ++i) {
        auto [x, y] = probe.sample(9, i);
        for (double t : {0.3, 5.0, 40.0}) {
            auto [fx, fy] = probe.flow(x, y, t);
            CHECK(fy >= 0.0);
            auto [bx, by] = probe.flow(fx, fy, -t);
            CHECK(bx == doctest::Approx(x).epsilon(1e-9));
            CHECK(by == doctest::Approx(y).epsilon(1e-9));
        }
    }
}

TEST_CASE("correlations at time zero") {
    const Iet G = golden_rotation();
    const RoofSpec s = golden_roof(G);
    const MixingProbe probe(s, G);
    const Observable o = Observable::bump(0.5, 0.2, 0.5, 0.4, true);
    REQUIRE(probe.support_under_graph(o));
    CHECK_FALSE(probe.support_under_graph(Observable::bump(0.5, 0.2, 0.9, 0.4)));
    const BoundObservable g = probe.bind(o);
    const double i1 = bump_power_integral(1), i2 = bump_power_integral(2);
    const double raw_mean = 0.2 * 0.4 * i1 * i1 / probe.area();
    const double raw_sq = 0.2 * 0.4 * i2 * i2 / probe.area();
    CHECK(g.offset == doctest::Approx(raw_mean));
    CHECK(g.variance() == doctest::Approx(raw_sq - raw_mean * raw_mean));
    const Estimate v = probe.correlation(g, g, 0.0, 400000, 3);
    CHECK(std::abs(v.value - g.variance()) < 3 * v.stderr_);

    const BoundObservable left = probe.bind(Observable::bump(0.15, 0.1, 0.5, 0.4));
    const BoundObservable right = probe.bind(Observable::bump(0.8, 0.1, 0.5, 0.4));
    const Estimate d = probe.correlation(left, right, 0.0, 100000, 3);
    CHECK(d.value + left.mean * right.mean == 0.0);
    CHECK(d.stderr_ == 0.0);

    // Triple product at t = 0 of an uncentered bump: integral of b^3.
    const BoundObservable u = probe.bind(Observable::bump(0.5, 0.2, 0.5, 0.4));
    const double i3 = bump_power_integral(3);
    const Estimate t = probe.triple(u, u, u, 0.0, 0.0, 400000, 4);
    const double exact = 0.2 * 0.4 * i3 * i3 / probe.area() - u.mean * u.mean * u.mean;
    CHECK(std::abs(t.value - exact) < 4 * t.stderr_);
}

TEST_CASE("a constant factor reduces the triple correlation to a pair") {
    const Iet G = golden_rotation();
    const MixingProbe probe(golden_roof(G), G);
    const BoundObservable one = probe.bind(Observable::constant(1.0));
    CHECK(one.mean == 1.0);
    CHECK(one.variance() == doctest::Approx(0.0).epsilon(1e-12));
    const BoundObservable g = probe.bind(Observable::bump(0.5, 0.2, 0.5, 0.4, true));
    for (double t3 : {0.0, 3.0, 20.0}) {
        const Estimate tr = probe.triple(one, g, g, 7.0, t3, 200000, 11);
        const Estimate pr = probe.correlation(g, g, t3, 200000, 12);
        CHECK(std::abs(tr.value - pr.value) < 4 * std::hypot(tr.stderr_, pr.stderr_));
    }
}

TEST_CASE("serial and parallel kernels agree bit for bit") {
    const Iet G = golden_rotation();
    const MixingProbe probe(golden_roof(G), G);
    const BoundObservable g = probe.bind(Observable::bump(0.5, 0.2, 0.5, 0.4, true));
    for (std::size_t n : {std::size_t{1}, std::size_t{8191}, std::size_t{8193}, std::size_t{50000}}) {
        const Estimate a = probe.correlation(g, g, 13.0, n, 2, false);
        const Estimate b = probe.correlation(g, g, 13.0, n, 2, true);
        CHECK(a.value == b.value);
        CHECK(a.stderr_ == b.stderr_);
        const Estimate c = probe.triple(g, g, g, 2.0, 5.0, n, 2, false);
        const Estimate d = probe.triple(g, g, g, 2.0, 5.0, n, 2, true);
        CHECK(c.value == d.value);
    }
    CHECK(probe.correlation(g, g, 1.0, 0, 2).samples == 0);
}

TEST_CASE("observable validation") {
    CHECK_THROWS_AS(Observable::bump(0.5, 0.0, 0.5, 0.1), DomainError);
    CHECK_THROWS_AS(Observable::bump(0.5, 0.1, 0.5, -1.0), DomainError);
    RoofSpec wide = RoofSpec::constant(2, 1.0);
    wide.cminus[0] = 1;
    const Iet big(Permutation::from_labels({"A", "B"}, {"B", "A"}), {ExactScalar(3), ExactScalar(1)});
    CHECK_THROWS_AS(MixingProbe(wide, big), DomainError);
}

}  // TEST_SUITE
