#include <doctest.h>

#include "ietlab/errors.hpp"
#include "ietlab/fixtures.hpp"
#include "ietlab/iet.hpp"
#include "oracles.hpp"

using namespace ietlab;

namespace {

Iet rotation(long p, long q) {
    return Iet(Permutation::from_labels({"A", "B"}, {"B", "A"}),
               {ExactScalar::rational(q - p, q), ExactScalar::rational(p, q)});
}

}  // namespace

TEST_SUITE("iet") {

TEST_CASE("rotation by 1/3 evaluates by hand") {
    const Iet T = rotation(1, 3);
    CHECK(T(ExactScalar::rational(1, 2)) == ExactScalar::rational(5, 6));
    CHECK(T(ExactScalar::rational(5, 6)) == ExactScalar::rational(1, 6));
    CHECK(T(ExactScalar::rational(2, 3)) == ExactScalar(0));
}

TEST_CASE("identity rearrangement is the identity") {
    const Iet T(Permutation(std::vector<std::string>{"A", "B"}, {0, 1}, {0, 1}),
                {ExactScalar::rational(1, 4), ExactScalar::rational(3, 4)});
    for (long k = 0; k < 20; ++k) CHECK(T(ExactScalar::rational(k, 20)) == ExactScalar::rational(k, 20));
    CHECK(T.inverse().lengths() == T.lengths());
}

TEST_CASE("evaluation agrees with the definition on random IETs") {
    for (std::uint64_t i = 0; i < 40; ++i) {
        const Iet T = oracle::random_rational_iet(3 + i % 3, 11, i);
        for (std::uint64_t k = 0; k < 50; ++k) {
            const ExactScalar x = T.total() * ExactScalar(mpq_class(static_cast<long>(counter_random(3, i * 100 + k) % 9973), 9973));
            CHECK(T(x) == oracle::apply_by_definition(T, x));
        }
        CHECK(T.images_partition());
    }
}

TEST_CASE("inverse composes to the identity") {
    const Iet T = rotation(1, 3);
    const Iet S = T.inverse();
    // In top order the inverse has lengths (1/3, 2/3): rotation by 2/3.
    CHECK(S.length(S.perm().top()[0]) == ExactScalar::rational(1, 3));
    CHECK(S(ExactScalar(0)) == ExactScalar::rational(2, 3));
    for (long k = 0; k < 1000; ++k) {
        const ExactScalar x = ExactScalar::rational(k, 1000);
        CHECK(S(T(x)) == x);
        CHECK(T(S(x)) == x);
    }
    const Iet U = symmetric_three();
    const Iet V = U.inverse();
    for (long k = 0; k < 300; ++k) {
        const ExactScalar x = ExactScalar::rational(k, 300);
        CHECK(V(U(x)) == x);
    }
    const Iet G = golden_rotation();
    for (long k = 0; k < 100; ++k) {
        const ExactScalar x = G.total() * ExactScalar::rational(k, 100);
        CHECK(G.inverse()(G(x)) == x);
    }
}

TEST_CASE("Keane check") {
    const KeaneReport r = keane_check(rotation(1, 3), 10);
    CHECK_FALSE(r.satisfied_to_depth);
    REQUIRE(r.colliding_pair.has_value());
    // Direct enumeration: the orbit of the discontinuity returns to it within three steps.
    const Iet T = rotation(1, 3);
    ExactScalar y = T.left(T.perm().index_of("B"));
    std::size_t k = 0;
    do {
        y = T(y);
        ++k;
    } while (!(y == T.left(T.perm().index_of("B"))));
    CHECK(k == 3);
    CHECK(r.colliding_pair->step <= 3);

    CHECK(keane_check(golden_rotation(), 100).satisfied_to_depth);
    CHECK(keane_check(rotation(1, 3), 1).satisfied_to_depth);
    CHECK_THROWS_AS(keane_check(rotation(1, 3), 0), DomainError);
}

TEST_CASE("first return time and double view") {
    const Iet T = golden_rotation();
    const ExactScalar x = T.total() * ExactScalar::rational(1, 7);
    const auto k = first_return_time(T, x, ExactScalar(0), T.length(0), 100);
    REQUIRE(k.has_value());
    ExactScalar y = x;
    for (std::size_t i = 0; i < *k; ++i) y = oracle::apply_by_definition(T, y);
    CHECK(y < T.length(0));
    const IetView v(T);
    CHECK(v.apply(x.to_double()) == doctest::Approx(T(x).to_double()).epsilon(1e-15));
}

TEST_CASE("constructor validation") {
    CHECK_THROWS(Iet(Permutation::from_labels({"A", "B"}, {"B", "A"}), {ExactScalar(1), ExactScalar(0)}));
    CHECK_THROWS(Permutation::from_labels({"A", "B"}, {"B", "C"}));
    CHECK_THROWS(rotation(1, 3)(ExactScalar(1)));
}

}  // TEST_SUITE
