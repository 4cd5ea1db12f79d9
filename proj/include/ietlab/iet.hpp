#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ietlab/exact.hpp"

namespace ietlab {

// Pair (pi_t, pi_b) over an ordered alphabet. Letters are indices into the alphabet;
// top()/bottom() list the letters in left-to-right order, positions are 0-based.
class Permutation {
public:
    Permutation() = default;
    Permutation(std::vector<std::string> alphabet, std::vector<int> top, std::vector<int> bottom);

    // Alphabet taken in top order.
    static Permutation from_labels(const std::vector<std::string>& top,
                                   const std::vector<std::string>& bottom);

    std::size_t size() const { return alphabet_.size(); }
    const std::vector<std::string>& alphabet() const { return alphabet_; }
    const std::vector<int>& top() const { return top_; }
    const std::vector<int>& bottom() const { return bottom_; }
    int pos_top(int a) const { return pos_t_[static_cast<std::size_t>(a)]; }
    int pos_bottom(int a) const { return pos_b_[static_cast<std::size_t>(a)]; }
    bool irreducible() const { return irreducible_; }
    int index_of(std::string_view label) const;
    const std::string& label(int a) const { return alphabet_[static_cast<std::size_t>(a)]; }

    Permutation inverse() const { return Permutation(alphabet_, bottom_, top_); }
    std::string str() const;

    friend bool operator==(const Permutation& l, const Permutation& r) {
        return l.alphabet_ == r.alphabet_ && l.top_ == r.top_ && l.bottom_ == r.bottom_;
    }

private:
    std::vector<std::string> alphabet_;
    std::vector<int> top_, bottom_, pos_t_, pos_b_;
    bool irreducible_ = false;
};

class Iet {
public:
    Iet() = default;
    Iet(Permutation perm, std::vector<ExactScalar> lengths);

    const Permutation& perm() const { return perm_; }
    std::size_t size() const { return perm_.size(); }
    const std::vector<ExactScalar>& lengths() const { return lengths_; }
    const ExactScalar& length(int a) const { return lengths_[static_cast<std::size_t>(a)]; }
    const ExactScalar& total() const { return total_; }

    const ExactScalar& left(int a) const { return left_t_[static_cast<std::size_t>(a)]; }
    ExactScalar right(int a) const { return left(a) + length(a); }
    const ExactScalar& left_bottom(int a) const { return left_b_[static_cast<std::size_t>(a)]; }
    ExactScalar right_bottom(int a) const { return left_bottom(a) + length(a); }
    const ExactScalar& shift(int a) const { return shift_[static_cast<std::size_t>(a)]; }

    // Letter of the half-open interval [l_a, r_a) that contains x.
    int locate(const ExactScalar& x) const;
    ExactScalar evaluate(const ExactScalar& x) const;
    ExactScalar operator()(const ExactScalar& x) const { return evaluate(x); }

    Iet inverse() const;

    // l_a for every letter a with pi_t(a) != 1, in top order.
    std::vector<ExactScalar> discontinuities() const;
    // All endpoints {l_a, r_a}, sorted, duplicates removed.
    std::vector<ExactScalar> endpoints() const;

    // Exact check that the image intervals tile [0, |I|).
    bool images_partition() const;

private:
    Permutation perm_;
    std::vector<ExactScalar> lengths_;
    ExactScalar total_;
    std::vector<ExactScalar> left_t_, left_b_, shift_;
    std::vector<ExactScalar> top_lefts_;  // left endpoints in top order
};

ExactScalar evaluate(const Iet& T, const ExactScalar& x);
Iet invert(const Iet& T);
ExactScalar iterate(const Iet& T, const Iet& Tinv, ExactScalar x, long long n);

struct KeaneCollision {
    int letter = -1;       // letter whose left endpoint was iterated
    int hit_letter = -1;   // letter of the discontinuity that was hit
    std::size_t step = 0;  // m with T^m(l_letter) = l_hit
};

struct KeaneReport {
    bool satisfied_to_depth = true;
    std::size_t depth = 0;
    std::optional<KeaneCollision> colliding_pair;
};

KeaneReport keane_check(const Iet& T, std::size_t depth);

// First k >= 1 with T^k x in [lo, hi); nullopt if not reached within max_steps.
std::optional<std::size_t> first_return_time(const Iet& T, const ExactScalar& x, const ExactScalar& lo,
                                             const ExactScalar& hi, std::size_t max_steps);

// Distance from x to the nearest element of a sorted vector.
ExactScalar distance_to_sorted(const std::vector<ExactScalar>& sorted, const ExactScalar& x);

// Double-precision copy of an IET for Monte-Carlo kernels.
struct IetView {
    std::vector<double> lefts;   // top order
    std::vector<double> shifts;  // top order
    std::vector<int> letters;    // top order
    double total = 1.0;

    explicit IetView(const Iet& T);
    int locate_pos(double x) const;
    double apply(double x) const { return x + shifts[static_cast<std::size_t>(locate_pos(x))]; }
};

}  // namespace ietlab
