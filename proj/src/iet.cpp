#include "ietlab/iet.hpp"

#include <algorithm>
#include <set>

#include "ietlab/errors.hpp"

namespace ietlab {

Permutation::Permutation(std::vector<std::string> alphabet, std::vector<int> top, std::vector<int> bottom)
    : alphabet_(std::move(alphabet)), top_(std::move(top)), bottom_(std::move(bottom)) {
    const std::size_t d = alphabet_.size();
    if (d < 2) throw DomainError("alphabet needs at least two letters");
    if (top_.size() != d || bottom_.size() != d) throw DomainError("permutation rows must cover the alphabet");
    pos_t_.assign(d, -1);
    pos_b_.assign(d, -1);
    for (std::size_t i = 0; i < d; ++i) {
        int a = top_[i];
        int b = bottom_[i];
        if (a < 0 || static_cast<std::size_t>(a) >= d || pos_t_[static_cast<std::size_t>(a)] != -1)
            throw DomainError("top row is not a bijection");
        if (b < 0 || static_cast<std::size_t>(b) >= d || pos_b_[static_cast<std::size_t>(b)] != -1)
            throw DomainError("bottom row is not a bijection");
        pos_t_[static_cast<std::size_t>(a)] = static_cast<int>(i);
        pos_b_[static_cast<std::size_t>(b)] = static_cast<int>(i);
    }
    std::set<std::string> uniq(alphabet_.begin(), alphabet_.end());
    if (uniq.size() != d) throw DomainError("duplicate alphabet labels");
    irreducible_ = true;
    std::vector<char> seen(d, 0);
    std::size_t pending = 0;  // letters seen in exactly one of the two prefixes
    for (std::size_t j = 0; j + 1 < d; ++j) {
        for (int a : {top_[j], bottom_[j]}) {
            char& s = seen[static_cast<std::size_t>(a)];
            s = static_cast<char>(s + 1);
            if (s == 1) ++pending;
            else --pending;
        }
        if (pending == 0) {
            irreducible_ = false;
            break;
        }
    }
}

Permutation Permutation::from_labels(const std::vector<std::string>& top, const std::vector<std::string>& bottom) {
    std::vector<int> t(top.size()), b(bottom.size());
    for (std::size_t i = 0; i < top.size(); ++i) t[i] = static_cast<int>(i);
    for (std::size_t i = 0; i < bottom.size(); ++i) {
        auto it = std::find(top.begin(), top.end(), bottom[i]);
        if (it == top.end()) throw DomainError("bottom label '" + bottom[i] + "' missing from top row");
        b[i] = static_cast<int>(it - top.begin());
    }
    return Permutation(top, t, b);
}

int Permutation::index_of(std::string_view label) const {
    for (std::size_t i = 0; i < alphabet_.size(); ++i)
        if (alphabet_[i] == label) return static_cast<int>(i);
    throw DomainError("unknown label '" + std::string(label) + "'");
}

std::string Permutation::str() const {
    std::string s;
    for (int a : top_) s += alphabet_[static_cast<std::size_t>(a)] + " ";
    s += "/";
    for (int a : bottom_) s += " " + alphabet_[static_cast<std::size_t>(a)];
    return s;
}

Iet::Iet(Permutation perm, std::vector<ExactScalar> lengths) : perm_(std::move(perm)), lengths_(std::move(lengths)) {
    const std::size_t d = perm_.size();
    if (lengths_.size() != d) throw DomainError("length vector does not match alphabet");
    for (const auto& l : lengths_)
        if (l.sign() <= 0) throw DomainError("lengths must be positive");
    left_t_.assign(d, ExactScalar());
    left_b_.assign(d, ExactScalar());
    shift_.assign(d, ExactScalar());
    top_lefts_.clear();
    ExactScalar acc;
    for (int a : perm_.top()) {
        left_t_[static_cast<std::size_t>(a)] = acc;
        top_lefts_.push_back(acc);
        acc += length(a);
    }
    total_ = acc;
    acc = ExactScalar();
    for (int a : perm_.bottom()) {
        left_b_[static_cast<std::size_t>(a)] = acc;
        acc += length(a);
    }
    for (std::size_t a = 0; a < d; ++a) shift_[a] = left_b_[a] - left_t_[a];
}

int Iet::locate(const ExactScalar& x) const {
    if (x.sign() < 0 || x >= total_) throw DomainError("point " + x.str() + " outside [0, " + total_.str() + ")");
    auto it = std::upper_bound(top_lefts_.begin(), top_lefts_.end(), x);
    auto pos = static_cast<std::size_t>(it - top_lefts_.begin()) - 1;
    return perm_.top()[pos];
}

ExactScalar Iet::evaluate(const ExactScalar& x) const { return x + shift(locate(x)); }

Iet Iet::inverse() const { return Iet(perm_.inverse(), lengths_); }

std::vector<ExactScalar> Iet::discontinuities() const {
    std::vector<ExactScalar> out(top_lefts_.begin() + 1, top_lefts_.end());
    return out;
}

std::vector<ExactScalar> Iet::endpoints() const {
    std::vector<ExactScalar> out = top_lefts_;
    out.push_back(total_);
    return out;
}

bool Iet::images_partition() const {
    std::vector<std::pair<ExactScalar, ExactScalar>> img;
    for (std::size_t a = 0; a < size(); ++a) {
        int ai = static_cast<int>(a);
        img.emplace_back(left(ai) + shift(ai), right(ai) + shift(ai));
    }
    std::sort(img.begin(), img.end());
    ExactScalar cur;
    for (const auto& [lo, hi] : img) {
        if (lo != cur) return false;
        cur = hi;
    }
    return cur == total_;
}

ExactScalar evaluate(const Iet& T, const ExactScalar& x) { return T.evaluate(x); }

Iet invert(const Iet& T) { return T.inverse(); }

ExactScalar iterate(const Iet& T, const Iet& Tinv, ExactScalar x, long long n) {
    if (n >= 0) {
        for (long long i = 0; i < n; ++i) x = T.evaluate(x);
    } else {
        for (long long i = 0; i < -n; ++i) x = Tinv.evaluate(x);
    }
    return x;
}

KeaneReport keane_check(const Iet& T, std::size_t depth) {
    if (depth < 1) throw DomainError("depth must be at least 1");
    KeaneReport rep;
    rep.depth = depth;
    std::vector<ExactScalar> disc = T.discontinuities();
    std::vector<int> disc_letter;
    for (std::size_t i = 1; i < T.perm().top().size(); ++i) disc_letter.push_back(T.perm().top()[i]);
    for (std::size_t m = 1; m <= depth; ++m) {
        for (std::size_t k = 0; k < disc.size(); ++k) {
            disc[k] = T.evaluate(disc[k]);
            for (std::size_t j = 0; j < disc_letter.size(); ++j) {
                if (disc[k] == T.left(disc_letter[j])) {
                    rep.satisfied_to_depth = false;
                    rep.colliding_pair = KeaneCollision{disc_letter[k], disc_letter[j], m};
                    return rep;
                }
            }
        }
    }
    return rep;
}

std::optional<std::size_t> first_return_time(const Iet& T, const ExactScalar& x, const ExactScalar& lo,
                                             const ExactScalar& hi, std::size_t max_steps) {
    ExactScalar y = x;
    for (std::size_t k = 1; k <= max_steps; ++k) {
        y = T.evaluate(y);
        if (y >= lo && y < hi) return k;
    }
    return std::nullopt;
}

ExactScalar distance_to_sorted(const std::vector<ExactScalar>& sorted, const ExactScalar& x) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
    ExactScalar best;
    bool have = false;
    if (it != sorted.end()) {
        best = *it - x;
        have = true;
    }
    if (it != sorted.begin()) {
        ExactScalar d = x - *(it - 1);
        if (!have || d < best) best = d;
        have = true;
    }
    if (!have) throw DomainError("empty endpoint set");
    return best;
}

IetView::IetView(const Iet& T) {
    for (int a : T.perm().top()) {
        lefts.push_back(T.left(a).to_double());
        shifts.push_back(T.shift(a).to_double());
        letters.push_back(a);
    }
    total = T.total().to_double();
}

int IetView::locate_pos(double x) const {
    auto it = std::upper_bound(lefts.begin(), lefts.end(), x);
    auto pos = it - lefts.begin() - 1;
    return pos < 0 ? 0 : static_cast<int>(pos);
}

}  // namespace ietlab
