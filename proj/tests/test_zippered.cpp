#include <doctest.h>

#include "ietlab/errors.hpp"
#include "ietlab/fixtures.hpp"
#include "ietlab/zippered.hpp"

using namespace ietlab;

namespace {

Permutation swap2() { return Permutation::from_labels({"A", "B"}, {"B", "A"}); }

std::vector<ExactScalar> ints(std::initializer_list<long> v) {
    std::vector<ExactScalar> out;
    for (long x : v) out.emplace_back(x);
    return out;
}

bool same(const ZipperedRectangles& a, const ZipperedRectangles& b) {
    return a.iet.perm() == b.iet.perm() && a.iet.lengths() == b.iet.lengths() && a.tau.tau == b.tau.tau;
}

}  // namespace

TEST_SUITE("zippered") {

TEST_CASE("canonical suspension data") {
    CHECK(canonical_tau(swap2()).tau == ints({1, -1}));
    const Permutation s3 = symmetric_three().perm();
    CHECK(canonical_tau(s3).tau == ints({2, 0, -2}));
    CHECK(in_theta(s3, canonical_tau(s3)));
    const Permutation id(std::vector<std::string>{"A", "B"}, {0, 1}, {0, 1});
    CHECK_THROWS_AS(canonical_tau(id), DomainError);
}

TEST_CASE("heights from suspension data") {
    CHECK(heights_from_tau(swap2(), canonical_tau(swap2())) == ints({1, 1}));
    const Permutation s3 = symmetric_three().perm();
    CHECK(heights_from_tau(s3, canonical_tau(s3)) == ints({2, 4, 2}));
    SuspensionData t = canonical_tau(s3);
    for (auto& v : t.tau) v *= ExactScalar::rational(5, 3);
    CHECK(heights_from_tau(s3, t) == std::vector<ExactScalar>{ExactScalar::rational(10, 3), ExactScalar::rational(20, 3),
                                                              ExactScalar::rational(10, 3)});
    for (const auto& h : heights_from_tau(s3, tilted_tau(s3))) CHECK(h.sign() > 0);
}

TEST_CASE("canonical data sums to zero, so the backward step is a tie") {
    const Iet T = symmetric_three();
    ZipperedRectangles z(T, canonical_tau(T.perm()));
    CHECK_THROWS_AS(backward_rv_step(z), BackwardUndefined);
    SuspensionData t = tilted_tau(T.perm());
    CHECK(in_theta(T.perm(), t));
    ExactScalar s;
    for (const auto& v : t.tau) s += v;
    CHECK(!s.is_zero());
}

TEST_CASE("forward then backward round trip on the golden rotation") {
    const Iet G = golden_rotation();
    ZipperedRectangles z(G, canonical_tau(G.perm()));
    ZipperedRectangles f = forward_rv_step(z);
    BackwardStep b = backward_rv_step(f);
    CHECK(same(b.z, z));
    ZipperedRectangles f2 = forward_rv_step(f);
    CHECK(same(backward_rv_step(backward_rv_step(f2).z).z, z));
    CHECK(b.B == rv_step(G).B);
}

TEST_CASE("backward then forward round trip and legal factors") {
    const Iet T = symmetric_three();
    ZipperedRectangles z(T, tilted_tau(T.perm()));
    std::vector<ZipperedRectangles> chain{z};
    std::vector<IntMatrix> mats;
    for (int k = 0; k < 5; ++k) {
        BackwardStep b = backward_rv_step(chain.back());
        CHECK(in_theta(b.z.iet.perm(), b.z.tau));
        for (const auto& h : b.z.heights) CHECK(h.sign() > 0);
        CHECK(is_legal_step(b.z.iet.perm(), b.B));
        CHECK(same(forward_rv_step(b.z), chain.back()));
        mats.push_back(b.B);
        chain.push_back(b.z);
    }
    // The reversed product equals B^(5) of the forward trace from the fifth preimage.
    IntMatrix P = IntMatrix::identity(3);
    for (auto it = mats.rbegin(); it != mats.rend(); ++it) P = P * *it;
    InductionTrace tr(chain.back().iet);
    tr.extend(5);
    CHECK(tr.product(5) == P);
    CHECK(tr.at(5).lengths() == T.lengths());
}

TEST_CASE("area normalization") {
    const Iet half(swap2(), {ExactScalar::rational(1, 2), ExactScalar::rational(1, 2)});
    ZipperedRectangles z(half, canonical_tau(swap2()));
    CHECK(z.area() == ExactScalar(1));
    CHECK(same(area_normalize(z), z));
    const Iet thirds(symmetric_three().perm(), {ExactScalar::rational(1, 3), ExactScalar::rational(1, 3), ExactScalar::rational(1, 3)});
    ZipperedRectangles y(thirds, canonical_tau(thirds.perm()));
    CHECK(y.area() == ExactScalar::rational(8, 3));
    ZipperedRectangles n = area_normalize(y);
    for (int a = 0; a < 3; ++a) CHECK(n.iet.length(a) == ExactScalar::rational(1, 8));
    CHECK(n.area() == ExactScalar(1));
    CHECK(same(area_normalize(n), n));
}

}  // TEST_SUITE
