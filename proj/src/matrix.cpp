#include "ietlab/matrix.hpp"

#include <algorithm>

#include "ietlab/errors.hpp"

namespace ietlab {

IntMatrix::IntMatrix(std::size_t d, std::initializer_list<long> entries) : IntMatrix(d) {
    if (entries.size() != d * d) throw DomainError("entry count does not match dimension");
    std::size_t k = 0;
    for (long v : entries) a_[k++] = v;
}

IntMatrix IntMatrix::identity(std::size_t d) {
    IntMatrix m(d);
    for (std::size_t i = 0; i < d; ++i) m(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::elementary(std::size_t d, int row, int col) {
    IntMatrix m = identity(d);
    m(static_cast<std::size_t>(row), static_cast<std::size_t>(col)) += 1;
    return m;
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix t(d_);
    for (std::size_t i = 0; i < d_; ++i)
        for (std::size_t j = 0; j < d_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

std::vector<mpz_class> IntMatrix::column_sums() const {
    std::vector<mpz_class> s(d_, 0);
    for (std::size_t i = 0; i < d_; ++i)
        for (std::size_t j = 0; j < d_; ++j) s[j] += (*this)(i, j);
    return s;
}

mpz_class IntMatrix::norm() const {
    auto s = column_sums();
    return *std::max_element(s.begin(), s.end());
}

bool IntMatrix::positive() const {
    return std::all_of(a_.begin(), a_.end(), [](const mpz_class& v) { return sgn(v) > 0; });
}

bool IntMatrix::has_zero_column() const {
    for (std::size_t j = 0; j < d_; ++j) {
        bool zero = true;
        for (std::size_t i = 0; i < d_; ++i)
            if (sgn((*this)(i, j)) != 0) zero = false;
        if (zero) return true;
    }
    return false;
}

mpz_class IntMatrix::determinant() const {
    // Bareiss fraction-free elimination.
    std::vector<mpz_class> m = a_;
    auto at = [&](std::size_t i, std::size_t j) -> mpz_class& { return m[i * d_ + j]; };
    mpz_class prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < d_; ++k) {
        if (at(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < d_ && at(p, k) == 0) ++p;
            if (p == d_) return 0;
            for (std::size_t j = 0; j < d_; ++j) std::swap(at(k, j), at(p, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < d_; ++i) {
            for (std::size_t j = k + 1; j < d_; ++j) {
                mpz_class v = at(i, j) * at(k, k) - at(i, k) * at(k, j);
                mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
                at(i, j) = v;
            }
        }
        prev = at(k, k);
    }
    return sign * at(d_ - 1, d_ - 1);
}

std::vector<ExactScalar> IntMatrix::apply(const std::vector<ExactScalar>& v) const {
    std::vector<ExactScalar> out(d_);
    for (std::size_t i = 0; i < d_; ++i) {
        ExactScalar acc;
        for (std::size_t j = 0; j < d_; ++j) {
            const mpz_class& c = (*this)(i, j);
            if (sgn(c) != 0) acc += ExactScalar(c) * v[j];
        }
        out[i] = acc;
    }
    return out;
}

std::vector<mpz_class> IntMatrix::apply(const std::vector<mpz_class>& v) const {
    std::vector<mpz_class> out(d_, 0);
    for (std::size_t i = 0; i < d_; ++i)
        for (std::size_t j = 0; j < d_; ++j) out[i] += (*this)(i, j) * v[j];
    return out;
}

std::vector<double> IntMatrix::apply(const std::vector<double>& v) const {
    std::vector<double> out(d_, 0.0);
    for (std::size_t i = 0; i < d_; ++i)
        for (std::size_t j = 0; j < d_; ++j) out[i] += (*this)(i, j).get_d() * v[j];
    return out;
}

IntMatrix operator*(const IntMatrix& l, const IntMatrix& r) {
    if (l.d_ != r.d_) throw DomainError("dimension mismatch");
    IntMatrix p(l.d_);
    for (std::size_t i = 0; i < l.d_; ++i)
        for (std::size_t k = 0; k < l.d_; ++k) {
            const mpz_class& c = l(i, k);
            if (sgn(c) == 0) continue;
            for (std::size_t j = 0; j < l.d_; ++j) p(i, j) += c * r(k, j);
        }
    return p;
}

std::vector<std::string> IntMatrix::row_strings() const {
    std::vector<std::string> rows;
    for (std::size_t i = 0; i < d_; ++i) {
        std::string s;
        for (std::size_t j = 0; j < d_; ++j) {
            if (j) s += " ";
            s += (*this)(i, j).get_str();
        }
        rows.push_back(s);
    }
    return rows;
}

}  // namespace ietlab
