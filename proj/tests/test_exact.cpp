#include <doctest.h>

#include <cmath>

#include "ietlab/errors.hpp"
#include "ietlab/exact.hpp"
#include "ietlab/real.hpp"
#include "ietlab/rng.hpp"

using namespace ietlab;

TEST_SUITE("exact") {

TEST_CASE("parse and print round trip") {
    for (const char* s : {"0", "1/3", "-7/2", "(3-1*sqrt(5))/2", "(-1+1*sqrt(5))/2", "(1+2*sqrt(3))/7"}) {
        const ExactScalar x = ExactScalar::parse(s);
        CHECK(x.str() == s);
        CHECK(ExactScalar::parse(x.str()) == x);
    }
    CHECK(ExactScalar::parse("3-2*sqrt(2)") == ExactScalar::quadratic(3, -2, 2));
    CHECK(ExactScalar::parse("(-1+sqrt(5))/2") == ExactScalar::quadratic(mpq_class(-1, 2), mpq_class(1, 2), 5));
    CHECK(ExactScalar::parse("0.25") == ExactScalar::rational(1, 4));
    CHECK_THROWS(ExactScalar::parse("sqrt"));
    CHECK_THROWS(ExactScalar::parse("(1+2*sqrt(5))/3)"));
}

TEST_CASE("quadratic field arithmetic matches an MPFR oracle") {
    mpfr_t o, s;
    mpfr_inits2(200, o, s, static_cast<mpfr_ptr>(nullptr));
    for (std::uint64_t i = 0; i < 300; ++i) {
        auto r = [&](std::uint64_t k) { return static_cast<long>(counter_random(7, 10 * i + k) % 41) - 20; };
        const ExactScalar x = ExactScalar::quadratic(mpq_class(r(0), 1 + std::abs(r(1))), mpq_class(r(2), 3), 5);
        const ExactScalar y = ExactScalar::quadratic(mpq_class(r(3), 7), mpq_class(r(4), 1 + std::abs(r(5))), 5);
        auto value = [&](const ExactScalar& z) {
            Real v(z, 200);
            return v;
        };
        // a + b sqrt(5) evaluated independently
        auto direct = [&](const ExactScalar& z) {
            mpfr_set_ui(s, 5, MPFR_RNDN);
            mpfr_sqrt(s, s, MPFR_RNDN);
            mpfr_mul_q(s, s, z.surd_part().get_mpq_t(), MPFR_RNDN);
            mpfr_add_q(o, s, z.rational_part().get_mpq_t(), MPFR_RNDN);
            return mpfr_get_d(o, MPFR_RNDN);
        };
        const double dx = direct(x), dy = direct(y);
        CHECK(direct(x + y) == doctest::Approx(dx + dy).epsilon(1e-12));
        CHECK(direct(x * y) == doctest::Approx(dx * dy).epsilon(1e-12));
        if (!y.is_zero()) CHECK(direct(x / y) == doctest::Approx(dx / dy).epsilon(1e-10));
        CHECK(value(x).to_double() == doctest::Approx(dx).epsilon(1e-15));
        const int expect = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
        if (std::abs(dx) > 1e-12) CHECK(x.sign() == expect);
        CHECK(((x - y).sign() < 0) == (x < y));
    }
    mpfr_clears(o, s, static_cast<mpfr_ptr>(nullptr));
}

TEST_CASE("sign of nearly cancelling values is exact") {
    // Consecutive convergents of sqrt(2) lie on opposite sides of it.
    const ExactScalar x = ExactScalar::quadratic(mpq_class(577, 408), -1, 2);
    CHECK(x.sign() > 0);
    const ExactScalar y = ExactScalar::quadratic(mpq_class(1393, 985), -1, 2);
    CHECK(y.sign() < 0);
    CHECK(ExactScalar::parse("-007/010") == ExactScalar::rational(-7, 10));
    CHECK((x * x.conjugate()) == ExactScalar(x.norm()));
}

TEST_CASE("cancellation-free conversion") {
    const ExactScalar x = ExactScalar::quadratic(mpq_class(665857, 470832), -1, 2);  // about 1.6e-12
    Real r(x, 64);
    CHECK(r.sign() > 0);
    CHECK(r.to_double() == doctest::Approx(1.5947429102833119e-12).epsilon(1e-9));
}

TEST_CASE("mixed fields are rejected") {
    const ExactScalar a = ExactScalar::quadratic(0, 1, 2), b = ExactScalar::quadratic(0, 1, 5);
    CHECK_THROWS_AS(a + b, MixedFieldError);
    CHECK_NOTHROW(a + ExactScalar::rational(1, 3));
    CHECK_THROWS_AS(ExactScalar::quadratic(0, 1, 4), DomainError);
    CHECK_THROWS(ExactScalar(1) / ExactScalar(0));
}

}  // TEST_SUITE
