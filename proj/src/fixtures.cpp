#include "ietlab/fixtures.hpp"

#include "ietlab/errors.hpp"
#include "ietlab/rauzy_veech.hpp"

namespace ietlab {

Iet golden_rotation() {
    Permutation p = Permutation::from_labels({"A", "B"}, {"B", "A"});
    return Iet(p, {ExactScalar::quadratic(mpq_class(3, 2), mpq_class(-1, 2), 5),
                   ExactScalar::quadratic(mpq_class(-1, 2), mpq_class(1, 2), 5)});
}

RoofSpec golden_roof(const Iet& T) {
    RoofSpec s = RoofSpec::constant(T.size(), 1.0);
    s.cminus[static_cast<std::size_t>(T.perm().index_of("A"))] = 1.0;
    return s;
}

Iet symmetric_three() {
    Permutation p = Permutation::from_labels({"A", "B", "C"}, {"C", "B", "A"});
    return Iet(p, {ExactScalar::rational(1, 2), ExactScalar::rational(1, 3), ExactScalar::rational(1, 6)});
}

namespace {

// s, D with n = s^2 D and D square-free; D = 1 for perfect squares.
std::pair<mpz_class, long> square_split(const mpz_class& n) {
    mpz_class s = 1, rest = n;
    for (mpz_class p = 2; p * p <= rest; ++p) {
        while (rest % (p * p) == 0) {
            rest /= p * p;
            s *= p;
        }
    }
    return {s, rest.get_si()};
}

bool quadratic_perron(const IntMatrix& B) {
    const std::size_t d = B.size();
    if (d == 2) return true;
    IntMatrix M = B;
    for (std::size_t i = 0; i < d; ++i) M(i, i) -= 1;
    return d == 3 && M.determinant() == 0;
}

ExactScalar perron_value(const IntMatrix& B, long* D) {
    mpz_class t = 0;
    for (std::size_t i = 0; i < B.size(); ++i) t += B(i, i);
    if (B.size() == 3) t -= 1;
    mpz_class disc = t * t - 4;
    if (disc <= 0) throw DomainError("loop matrix has no real Perron eigenvalue");
    auto [s, d] = square_split(disc);
    *D = d;
    if (d == 1) return ExactScalar(mpq_class(t + s, 2));
    return ExactScalar::quadratic(mpq_class(t, 2), mpq_class(s, 2), d);
}

}  // namespace

std::optional<RauzyLoop> find_positive_loop(const Permutation& p, std::size_t max_len) {
    const std::size_t d = p.size();
    for (std::size_t len = 1; len <= max_len; ++len) {
        for (unsigned long code = 0; code < (1UL << len); ++code) {
            Permutation cur = p;
            IntMatrix B = IntMatrix::identity(d);
            std::string word;
            for (std::size_t k = 0; k < len; ++k) {
                const bool bottom = (code >> (len - 1 - k)) & 1UL;
                int w = 0, l = 0;
                cur = rauzy_move(cur, bottom ? StepType::Bottom : StepType::Top, &w, &l);
                B = B * IntMatrix::elementary(d, w, l);
                word += bottom ? 'b' : 't';
            }
            if (!(cur == p) || !B.positive() || !quadratic_perron(B)) continue;
            long D = 0;
            try {
                perron_value(B, &D);
            } catch (const DomainError&) {
                continue;
            }
            if (D == 1) continue;
            return RauzyLoop{word, B};
        }
    }
    return std::nullopt;
}

Iet periodic_iet(const Permutation& p, const RauzyLoop& loop) {
    const std::size_t d = p.size();
    long D = 0;
    const ExactScalar rho = perron_value(loop.B, &D);
    std::vector<std::vector<ExactScalar>> rows(d, std::vector<ExactScalar>(d));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) rows[i][j] = ExactScalar(mpq_class(loop.B(i, j))) - (i == j ? rho : ExactScalar(0));
    std::vector<ExactScalar> v(d);
    if (d == 2) {
        v = {-rows[0][1], rows[0][0]};
    } else if (d == 3) {
        auto cross = [](const std::vector<ExactScalar>& a, const std::vector<ExactScalar>& b) {
            return std::vector<ExactScalar>{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
                                            a[0] * b[1] - a[1] * b[0]};
        };
        for (auto [i, j] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
            v = cross(rows[static_cast<std::size_t>(i)], rows[static_cast<std::size_t>(j)]);
            bool zero = true;
            for (const auto& c : v) zero = zero && c.is_zero();
            if (!zero) break;
        }
    } else {
        throw DomainError("periodic IET construction supports d = 2 or 3");
    }
    ExactScalar sum;
    for (const auto& c : v) sum += c;
    for (auto& c : v) c /= sum;
    for (const auto& c : v)
        if (c.sign() <= 0) throw DomainError("Perron vector is not positive");
    const std::vector<ExactScalar> Bv = loop.B.apply(v);
    for (std::size_t i = 0; i < d; ++i)
        if (!(Bv[i] == rho * v[i])) throw DomainError("eigenvector check failed");
    return Iet(p, v);
}

Iet bounded_type_three() {
    const Permutation p = symmetric_three().perm();
    auto loop = find_positive_loop(p, 10);
    if (!loop) throw DomainError("no positive quadratic loop found");
    return periodic_iet(p, *loop);
}

}  // namespace ietlab
