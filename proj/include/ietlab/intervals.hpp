#pragma once

#include <optional>
#include <vector>

#include "ietlab/iet.hpp"

namespace ietlab {

struct Interval {
    ExactScalar lo, hi;  // closed [lo, hi]
};

// Finite union of closed intervals with exact endpoints.
class IntervalUnion {
public:
    void add(const ExactScalar& lo, const ExactScalar& hi);
    void add(const Interval& iv) { add(iv.lo, iv.hi); }
    void merge(const IntervalUnion& other);
    // Sorts and fuses overlapping parts; idempotent.
    void normalize();

    const std::vector<Interval>& parts() const { return parts_; }
    bool empty() const { return parts_.empty(); }
    ExactScalar measure() const;
    bool contains(const ExactScalar& x) const;
    std::optional<Interval> witness(const ExactScalar& x) const;
    // [lo, hi] minus the union, as closed pieces of positive length.
    IntervalUnion complement_within(const ExactScalar& lo, const ExactScalar& hi) const;

private:
    std::vector<Interval> parts_;
    bool normalized_ = true;
};

// Image of [lo, hi] under an IET, split at its discontinuities. Pieces are closed.
std::vector<Interval> image_pieces(const Iet& S, const Interval& iv);

// [c - rho, c + rho] intersected with [0, |I|], wrapped around the circle at the ends.
std::vector<Interval> wrapped_neighborhood(const ExactScalar& c, const ExactScalar& rho, const ExactScalar& total);

// Union over letters a and i in [i0, i1] of T^{-i} applied to the rho-neighbourhood of l_a.
IntervalUnion preimage_union(const Iet& T, const ExactScalar& rho, long long i0, long long i1);

}  // namespace ietlab
