#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "ietlab/exact.hpp"

namespace ietlab {

// Dense square matrix of arbitrary-precision integers, row-major.
class IntMatrix {
public:
    IntMatrix() = default;
    explicit IntMatrix(std::size_t d) : d_(d), a_(d * d, 0) {}
    IntMatrix(std::size_t d, std::initializer_list<long> entries);

    static IntMatrix identity(std::size_t d);
    // I + E_{row, col}
    static IntMatrix elementary(std::size_t d, int row, int col);

    std::size_t size() const { return d_; }
    mpz_class& operator()(std::size_t i, std::size_t j) { return a_[i * d_ + j]; }
    const mpz_class& operator()(std::size_t i, std::size_t j) const { return a_[i * d_ + j]; }

    IntMatrix transpose() const;
    std::vector<mpz_class> column_sums() const;
    // Largest column entry-sum.
    mpz_class norm() const;
    bool positive() const;
    bool has_zero_column() const;
    mpz_class determinant() const;

    std::vector<ExactScalar> apply(const std::vector<ExactScalar>& v) const;
    std::vector<mpz_class> apply(const std::vector<mpz_class>& v) const;
    std::vector<double> apply(const std::vector<double>& v) const;

    friend IntMatrix operator*(const IntMatrix& l, const IntMatrix& r);
    friend bool operator==(const IntMatrix& l, const IntMatrix& r) { return l.d_ == r.d_ && l.a_ == r.a_; }

    std::vector<std::string> row_strings() const;

private:
    std::size_t d_ = 0;
    std::vector<mpz_class> a_;
};

}  // namespace ietlab
