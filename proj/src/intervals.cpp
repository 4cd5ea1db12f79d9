#include "ietlab/intervals.hpp"

#include <algorithm>

#include "ietlab/errors.hpp"

namespace ietlab {

void IntervalUnion::add(const ExactScalar& lo, const ExactScalar& hi) {
    if (hi < lo) throw DomainError("interval with hi < lo");
    parts_.push_back(Interval{lo, hi});
    normalized_ = false;
}

void IntervalUnion::merge(const IntervalUnion& other) {
    parts_.insert(parts_.end(), other.parts_.begin(), other.parts_.end());
    normalized_ = false;
}

void IntervalUnion::normalize() {
    if (normalized_) return;
    std::sort(parts_.begin(), parts_.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> out;
    for (auto& iv : parts_) {
        if (!out.empty() && iv.lo <= out.back().hi) {
            if (iv.hi > out.back().hi) out.back().hi = iv.hi;
        } else {
            out.push_back(iv);
        }
    }
    parts_ = std::move(out);
    normalized_ = true;
}

ExactScalar IntervalUnion::measure() const {
    IntervalUnion c = *this;
    c.normalize();
    ExactScalar m;
    for (const auto& iv : c.parts_) m += iv.hi - iv.lo;
    return m;
}

std::optional<Interval> IntervalUnion::witness(const ExactScalar& x) const {
    if (!normalized_) {
        for (const auto& iv : parts_)
            if (iv.lo <= x && x <= iv.hi) return iv;
        return std::nullopt;
    }
    auto it = std::upper_bound(parts_.begin(), parts_.end(), x,
                               [](const ExactScalar& v, const Interval& iv) { return v < iv.lo; });
    if (it == parts_.begin()) return std::nullopt;
    --it;
    if (x <= it->hi) return *it;
    return std::nullopt;
}

bool IntervalUnion::contains(const ExactScalar& x) const { return witness(x).has_value(); }

IntervalUnion IntervalUnion::complement_within(const ExactScalar& lo, const ExactScalar& hi) const {
    IntervalUnion c = *this;
    c.normalize();
    IntervalUnion out;
    ExactScalar cur = lo;
    for (const auto& iv : c.parts_) {
        if (iv.hi <= cur) continue;
        if (iv.lo >= hi) break;
        if (iv.lo > cur) out.add(cur, iv.lo);
        cur = iv.hi;
        if (cur >= hi) break;
    }
    if (cur < hi) out.add(cur, hi);
    out.normalize();
    return out;
}

std::vector<Interval> image_pieces(const Iet& S, const Interval& iv) {
    std::vector<Interval> out;
    ExactScalar lo = iv.lo;
    const ExactScalar& total = S.total();
    ExactScalar hi = iv.hi < total ? iv.hi : total;
    while (lo < hi) {
        int a = S.locate(lo);
        ExactScalar end = S.right(a);
        ExactScalar stop = hi < end ? hi : end;
        out.push_back(Interval{lo + S.shift(a), stop + S.shift(a)});
        lo = stop;
    }
    if (out.empty() && iv.lo == iv.hi && iv.lo < total) {
        ExactScalar p = S.evaluate(iv.lo);
        out.push_back(Interval{p, p});
    }
    return out;
}

std::vector<Interval> wrapped_neighborhood(const ExactScalar& c, const ExactScalar& rho, const ExactScalar& total) {
    std::vector<Interval> out;
    ExactScalar lo = c - rho;
    ExactScalar hi = c + rho;
    if (lo.sign() < 0) {
        out.push_back(Interval{total + lo, total});
        lo = ExactScalar(0);
    }
    if (hi > total) {
        out.push_back(Interval{ExactScalar(0), hi - total});
        hi = total;
    }
    out.push_back(Interval{lo, hi});
    return out;
}

IntervalUnion preimage_union(const Iet& T, const ExactScalar& rho, long long i0, long long i1) {
    IntervalUnion out;
    if (i1 < i0 || rho.sign() <= 0) return out;
    Iet Tinv = T.inverse();
    for (std::size_t a = 0; a < T.size(); ++a) {
        std::vector<Interval> cur = wrapped_neighborhood(T.left(static_cast<int>(a)), rho, T.total());
        for (long long i = 0; i <= i1; ++i) {
            if (i >= i0)
                for (const auto& iv : cur) out.add(iv);
            if (i == i1) break;
            std::vector<Interval> next;
            for (const auto& iv : cur) {
                auto p = image_pieces(Tinv, iv);
                next.insert(next.end(), p.begin(), p.end());
            }
            cur = std::move(next);
        }
    }
    out.normalize();
    return out;
}

}  // namespace ietlab
