#pragma once

#include <vector>

#include "ietlab/iet.hpp"
#include "ietlab/matrix.hpp"
#include "ietlab/rauzy_veech.hpp"

namespace ietlab {

struct SuspensionData {
    std::vector<ExactScalar> tau;
};

// Top-order partial sums positive, bottom-order partial sums negative (first d-1 letters).
bool in_theta(const Permutation& perm, const SuspensionData& tau);

struct ZipperedRectangles {
    Iet iet;
    SuspensionData tau;
    std::vector<ExactScalar> heights;

    ZipperedRectangles(Iet T, SuspensionData t);
    ExactScalar area() const;
};

SuspensionData canonical_tau(const Permutation& perm);
// canonical_tau always sums to zero, which leaves the backward step undetermined. This moves one
// coordinate by +-1/2 (letters in alphabet order, + first) to the first admissible datum with nonzero sum.
SuspensionData tilted_tau(const Permutation& perm);
std::vector<ExactScalar> heights_from_tau(const Permutation& perm, const SuspensionData& tau);

struct BackwardStep {
    ZipperedRectangles z;
    IntMatrix B;
    StepType type;  // type of the forward step that maps z back to its input
};

BackwardStep backward_rv_step(const ZipperedRectangles& z);
// Forward step acting on the full triple (lengths and tau share the cocycle).
ZipperedRectangles forward_rv_step(const ZipperedRectangles& z);
ZipperedRectangles area_normalize(const ZipperedRectangles& z);

}  // namespace ietlab
