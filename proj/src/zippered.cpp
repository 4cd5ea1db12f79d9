#include "ietlab/zippered.hpp"

#include <algorithm>

#include "ietlab/errors.hpp"

namespace ietlab {

bool in_theta(const Permutation& perm, const SuspensionData& tau) {
    const std::size_t d = perm.size();
    if (tau.tau.size() != d) return false;
    ExactScalar st, sb;
    for (std::size_t j = 0; j + 1 < d; ++j) {
        st += tau.tau[static_cast<std::size_t>(perm.top()[j])];
        sb += tau.tau[static_cast<std::size_t>(perm.bottom()[j])];
        if (st.sign() <= 0 || sb.sign() >= 0) return false;
    }
    return true;
}

std::vector<ExactScalar> heights_from_tau(const Permutation& perm, const SuspensionData& tau) {
    const std::size_t d = perm.size();
    std::vector<ExactScalar> h(d);
    for (std::size_t a = 0; a < d; ++a) {
        int ai = static_cast<int>(a);
        ExactScalar acc;
        for (std::size_t b = 0; b < d; ++b) {
            int bi = static_cast<int>(b);
            bool tl = perm.pos_top(bi) < perm.pos_top(ai);
            bool bl = perm.pos_bottom(bi) < perm.pos_bottom(ai);
            if (tl && perm.pos_bottom(bi) > perm.pos_bottom(ai)) acc += tau.tau[b];
            if (perm.pos_top(bi) > perm.pos_top(ai) && bl) acc -= tau.tau[b];
        }
        if (acc.sign() <= 0) throw InvalidSuspension("non-positive height for letter " + perm.label(ai));
        h[a] = acc;
    }
    return h;
}

ZipperedRectangles::ZipperedRectangles(Iet T, SuspensionData t) : iet(std::move(T)), tau(std::move(t)) {
    if (!in_theta(iet.perm(), tau)) throw InvalidSuspension("suspension data violates the partial-sum sign conditions");
    heights = heights_from_tau(iet.perm(), tau);
}

ExactScalar ZipperedRectangles::area() const {
    ExactScalar a;
    for (std::size_t i = 0; i < heights.size(); ++i) a += iet.lengths()[i] * heights[i];
    return a;
}

SuspensionData canonical_tau(const Permutation& perm) {
    if (!perm.irreducible()) throw DomainError("canonical suspension data needs an irreducible permutation");
    SuspensionData s;
    for (std::size_t a = 0; a < perm.size(); ++a) {
        int ai = static_cast<int>(a);
        s.tau.emplace_back(static_cast<long>(perm.pos_bottom(ai) - perm.pos_top(ai)));
    }
    if (!in_theta(perm, s)) throw DomainError("canonical suspension data failed validation");
    return s;
}

SuspensionData tilted_tau(const Permutation& perm) {
    const SuspensionData base = canonical_tau(perm);
    for (std::size_t a = 0; a < perm.size(); ++a) {
        for (long sgn : {1L, -1L}) {
            SuspensionData s = base;
            s.tau[a] += ExactScalar::rational(sgn, 2);
            if (in_theta(perm, s)) return s;
        }
    }
    throw DomainError("no admissible tilt of the canonical suspension data");
}

BackwardStep backward_rv_step(const ZipperedRectangles& z) {
    const Permutation& p = z.iet.perm();
    const std::size_t d = p.size();
    ExactScalar total;
    for (const auto& t : z.tau.tau) total += t;
    int s = total.sign();
    if (s == 0) throw BackwardUndefined("sum of suspension data is zero; preimage type undetermined");
    std::vector<int> top = p.top();
    std::vector<int> bottom = p.bottom();
    StepType type;
    int winner, loser;
    if (s < 0) {
        type = StepType::Top;
        winner = top.back();
        auto pos = std::find(bottom.begin(), bottom.end(), winner);
        loser = *(pos + 1);
        bottom.erase(pos + 1);
        bottom.push_back(loser);
    } else {
        type = StepType::Bottom;
        winner = bottom.back();
        auto pos = std::find(top.begin(), top.end(), winner);
        loser = *(pos + 1);
        top.erase(pos + 1);
        top.push_back(loser);
    }
    IntMatrix B = IntMatrix::elementary(d, winner, loser);
    Permutation prev(p.alphabet(), top, bottom);
    auto lam = B.apply(z.iet.lengths());
    SuspensionData tau{B.apply(z.tau.tau)};
    if (!in_theta(prev, tau)) throw BackwardUndefined("preimage suspension data leaves the admissible cone");
    return BackwardStep{ZipperedRectangles(Iet(prev, lam), tau), B, type};
}

ZipperedRectangles forward_rv_step(const ZipperedRectangles& z) {
    RvStep s = rv_step(z.iet);
    SuspensionData tau = z.tau;
    tau.tau[static_cast<std::size_t>(s.winner)] -= tau.tau[static_cast<std::size_t>(s.loser)];
    return ZipperedRectangles(s.iet, tau);
}

ZipperedRectangles area_normalize(const ZipperedRectangles& z) {
    ExactScalar a = z.area();
    if (a.sign() <= 0) throw InvalidSuspension("zero area");
    std::vector<ExactScalar> lam;
    for (const auto& l : z.iet.lengths()) lam.push_back(l / a);
    return ZipperedRectangles(Iet(z.iet.perm(), lam), z.tau);
}

}  // namespace ietlab
