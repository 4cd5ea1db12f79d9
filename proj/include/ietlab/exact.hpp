#pragma once

#include <compare>
#include <string>
#include <string_view>

#include <gmpxx.h>
#include <mpfr.h>

namespace ietlab {

// Element of Q or of a real quadratic field Q(sqrt(D)), stored as a + b*sqrt(D).
// D == 0 marks a rational value; rational values combine with any field.
class ExactScalar {
public:
    ExactScalar() = default;
    ExactScalar(long v) : a_(v) {}  // NOLINT(google-explicit-constructor)
    ExactScalar(const mpz_class& v) : a_(v) {}  // NOLINT
    ExactScalar(const mpq_class& v) : a_(v) { a_.canonicalize(); }  // NOLINT

    static ExactScalar rational(long p, long q);
    static ExactScalar quadratic(const mpq_class& a, const mpq_class& b, long D);
    static ExactScalar parse(std::string_view text);

    const mpq_class& rational_part() const { return a_; }
    const mpq_class& surd_part() const { return b_; }
    long radicand() const { return d_; }
    bool is_rational() const { return d_ == 0; }

    int sign() const;
    bool is_zero() const { return sgn(a_) == 0 && sgn(b_) == 0; }
    ExactScalar abs() const { return sign() < 0 ? -*this : *this; }
    ExactScalar conjugate() const;
    mpq_class norm() const;  // a^2 - b^2 D

    ExactScalar operator-() const;
    ExactScalar& operator+=(const ExactScalar& o);
    ExactScalar& operator-=(const ExactScalar& o);
    ExactScalar& operator*=(const ExactScalar& o);
    ExactScalar& operator/=(const ExactScalar& o);

    friend ExactScalar operator+(ExactScalar l, const ExactScalar& r) { return l += r; }
    friend ExactScalar operator-(ExactScalar l, const ExactScalar& r) { return l -= r; }
    friend ExactScalar operator*(ExactScalar l, const ExactScalar& r) { return l *= r; }
    friend ExactScalar operator/(ExactScalar l, const ExactScalar& r) { return l /= r; }

    friend bool operator==(const ExactScalar& l, const ExactScalar& r);
    friend std::strong_ordering operator<=>(const ExactScalar& l, const ExactScalar& r);

    double to_double() const;
    // Cancellation-free conversion; relative error below 8 ulp at the target precision.
    void to_mpfr(mpfr_t out) const;
    std::string str() const;

private:
    void normalize();
    long join(const ExactScalar& o) const;

    mpq_class a_{0};
    mpq_class b_{0};
    long d_ = 0;
};

std::ostream& operator<<(std::ostream& os, const ExactScalar& x);

bool is_square_free(long D);

}  // namespace ietlab
