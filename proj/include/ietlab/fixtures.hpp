#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "ietlab/iet.hpp"
#include "ietlab/matrix.hpp"
#include "ietlab/roof.hpp"

namespace ietlab {

// Rotation by the golden mean: top AB, bottom BA, lengths ((3-sqrt5)/2, (sqrt5-1)/2).
Iet golden_rotation();
// c0 = 1 and a single one-sided singularity of strength 1 at r_A from the left.
RoofSpec golden_roof(const Iet& T);
// Top ABC, bottom CBA, lengths (1/2, 1/3, 1/6).
Iet symmetric_three();

struct RauzyLoop {
    std::string word;  // step types, 't' or 'b'
    IntMatrix B;       // product of the step matrices along the word
};

// Shortest (then lexicographically first) closed path from p with a positive product whose
// Perron eigenvalue is a quadratic irrational of the form (t + sqrt(t^2 - 4))/2.
std::optional<RauzyLoop> find_positive_loop(const Permutation& p, std::size_t max_len);

// The IET whose induction repeats `loop` forever: lengths = Perron eigenvector of B, sum 1.
Iet periodic_iet(const Permutation& p, const RauzyLoop& loop);

// Periodic bounded-type IET on the symmetric 3-permutation.
Iet bounded_type_three();

}  // namespace ietlab
