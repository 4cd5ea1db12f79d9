#include "ietlab/exact.hpp"

#include <cctype>
#include <cmath>
#include <ostream>
#include <regex>

#include "ietlab/errors.hpp"

namespace ietlab {

bool is_square_free(long D) {
    if (D < 2) return false;
    for (long p = 2; p * p <= D; ++p) {
        if (D % (p * p) == 0) return false;
    }
    return true;
}

ExactScalar ExactScalar::rational(long p, long q) {
    if (q == 0) throw DomainError("zero denominator");
    mpq_class v(p, q);
    v.canonicalize();
    return ExactScalar(v);
}

ExactScalar ExactScalar::quadratic(const mpq_class& a, const mpq_class& b, long D) {
    if (!is_square_free(D)) throw DomainError("radicand must be a square-free integer > 1");
    ExactScalar x;
    x.a_ = a;
    x.b_ = b;
    x.a_.canonicalize();
    x.b_.canonicalize();
    x.d_ = D;
    x.normalize();
    return x;
}

void ExactScalar::normalize() {
    if (sgn(b_) == 0) d_ = 0;
}

long ExactScalar::join(const ExactScalar& o) const {
    if (d_ == 0) return o.d_;
    if (o.d_ == 0 || o.d_ == d_) return d_;
    throw MixedFieldError("cannot combine Q(sqrt(" + std::to_string(d_) + ")) with Q(sqrt(" +
                          std::to_string(o.d_) + "))");
}

int ExactScalar::sign() const {
    int sa = sgn(a_);
    int sb = sgn(b_);
    if (sb == 0) return sa;
    if (sa == 0 || sa == sb) return sb;
    mpq_class a2 = a_ * a_;
    mpq_class b2 = b_ * b_ * d_;
    return cmp(a2, b2) > 0 ? sa : sb;
}

ExactScalar ExactScalar::conjugate() const {
    ExactScalar x = *this;
    x.b_ = -x.b_;
    return x;
}

mpq_class ExactScalar::norm() const {
    mpq_class n = a_ * a_;
    if (d_ != 0) n -= b_ * b_ * d_;
    return n;
}

ExactScalar ExactScalar::operator-() const {
    ExactScalar x = *this;
    x.a_ = -x.a_;
    x.b_ = -x.b_;
    return x;
}

ExactScalar& ExactScalar::operator+=(const ExactScalar& o) {
    long D = join(o);
    a_ += o.a_;
    if (o.d_ != 0) b_ += o.b_;
    d_ = D;
    normalize();
    return *this;
}

ExactScalar& ExactScalar::operator-=(const ExactScalar& o) {
    long D = join(o);
    a_ -= o.a_;
    if (o.d_ != 0) b_ -= o.b_;
    d_ = D;
    normalize();
    return *this;
}

ExactScalar& ExactScalar::operator*=(const ExactScalar& o) {
    long D = join(o);
    if (o.d_ == 0) {
        a_ *= o.a_;
        b_ *= o.a_;
    } else if (d_ == 0) {
        b_ = a_ * o.b_;
        a_ *= o.a_;
    } else {
        mpq_class na = a_ * o.a_ + b_ * o.b_ * D;
        mpq_class nb = a_ * o.b_ + b_ * o.a_;
        a_ = na;
        b_ = nb;
    }
    d_ = D;
    normalize();
    return *this;
}

ExactScalar& ExactScalar::operator/=(const ExactScalar& o) {
    if (o.is_zero()) throw DomainError("division by zero");
    join(o);
    if (o.d_ == 0) {
        a_ /= o.a_;
        b_ /= o.a_;
        return *this;
    }
    mpq_class n = o.norm();
    *this *= o.conjugate();
    a_ /= n;
    b_ /= n;
    normalize();
    return *this;
}

bool operator==(const ExactScalar& l, const ExactScalar& r) {
    return l.a_ == r.a_ && l.b_ == r.b_ && (l.d_ == r.d_ || sgn(l.b_) == 0);
}

std::strong_ordering operator<=>(const ExactScalar& l, const ExactScalar& r) {
    int s = (l - r).sign();
    if (s < 0) return std::strong_ordering::less;
    if (s > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

double ExactScalar::to_double() const {
    if (d_ == 0) return a_.get_d();
    int sa = sgn(a_);
    int sb = sgn(b_);
    double r = std::sqrt(static_cast<double>(d_));
    if (sa == 0 || sa == sb) return a_.get_d() + b_.get_d() * r;
    mpq_class n = norm();
    return n.get_d() / (a_.get_d() - b_.get_d() * r);
}

void ExactScalar::to_mpfr(mpfr_t out) const {
    if (d_ == 0) {
        mpfr_set_q(out, a_.get_mpq_t(), MPFR_RNDN);
        return;
    }
    mpfr_prec_t p = mpfr_get_prec(out) + 8;
    mpfr_t s, t;
    mpfr_inits2(p, s, t, static_cast<mpfr_ptr>(nullptr));
    mpfr_sqrt_ui(s, static_cast<unsigned long>(d_), MPFR_RNDN);
    int sa = sgn(a_);
    int sb = sgn(b_);
    if (sa == 0 || sa == sb) {
        mpfr_mul_q(s, s, b_.get_mpq_t(), MPFR_RNDN);
        mpfr_set_q(t, a_.get_mpq_t(), MPFR_RNDN);
        mpfr_add(out, t, s, MPFR_RNDN);
    } else {
        // (a + b r) = (a^2 - b^2 D) / (a - b r), both terms of the denominator share a sign
        mpfr_mul_q(s, s, b_.get_mpq_t(), MPFR_RNDN);
        mpfr_set_q(t, a_.get_mpq_t(), MPFR_RNDN);
        mpfr_sub(t, t, s, MPFR_RNDN);
        mpq_class n = norm();
        mpfr_set_q(s, n.get_mpq_t(), MPFR_RNDN);
        mpfr_div(out, s, t, MPFR_RNDN);
    }
    mpfr_clears(s, t, static_cast<mpfr_ptr>(nullptr));
}

std::string ExactScalar::str() const {
    if (d_ == 0) return a_.get_str();
    mpz_class c = lcm(a_.get_den(), b_.get_den());
    mpz_class A = a_.get_num() * (c / a_.get_den());
    mpz_class B = b_.get_num() * (c / b_.get_den());
    std::string out = "(" + A.get_str();
    out += sgn(B) < 0 ? "-" : "+";
    out += mpz_class(::abs(B)).get_str() + "*sqrt(" + std::to_string(d_) + "))/" + c.get_str();
    return out;
}

namespace {

mpq_class parse_decimal(const std::string& s) {
    static const std::regex rat(R"(^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$)");
    static const std::regex dec(R"(^\s*([+-]?)(\d*)\.(\d+)(?:[eE]([+-]?\d+))?\s*$)");
    std::smatch m;
    if (std::regex_match(s, m, rat)) {
        mpz_class num(m[1].str(), 10);
        mpz_class den = m[2].matched ? mpz_class(m[2].str(), 10) : mpz_class(1);
        if (den == 0) throw DomainError("zero denominator in '" + s + "'");
        mpq_class q(num, den);
        q.canonicalize();
        return q;
    }
    if (std::regex_match(s, m, dec)) {
        std::string digits = m[2].str() + m[3].str();
        if (digits.empty()) digits = "0";
        mpz_class num(digits, 10);
        long exp10 = -static_cast<long>(m[3].length());
        if (m[4].matched) exp10 += std::stol(m[4].str());
        mpz_class p10;
        mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
        mpq_class q = exp10 < 0 ? mpq_class(num, p10) : mpq_class(num * p10);
        q.canonicalize();
        if (m[1].str() == "-") q = -q;
        return q;
    }
    throw DomainError("malformed scalar '" + s + "'");
}

}  // namespace

ExactScalar ExactScalar::parse(std::string_view text) {
    std::string s(text);
    // (a+b*sqrt(D))/c, with optional b, optional /c, and optional parentheses when /c is absent
    static const std::regex quad(
        R"(^\s*\(\s*([+-]?\d+)\s*([+-])\s*(?:(\d+)\s*\*\s*)?sqrt\(\s*(\d+)\s*\)\s*\)\s*(?:/\s*(\d+))?\s*$)");
    static const std::regex bare(
        R"(^\s*()([+-]?\d+)\s*([+-])\s*(?:(\d+)\s*\*\s*)?sqrt\(\s*(\d+)\s*\)\s*()$)");
    std::smatch m;
    const bool paren = std::regex_match(s, m, quad);
    if (paren || std::regex_match(s, m, bare)) {
        const int o = paren ? 0 : 1;
        mpz_class a(m[1 + o].str(), 10);
        mpz_class b = m[3 + o].matched ? mpz_class(m[3 + o].str(), 10) : mpz_class(1);
        if (m[2 + o].str() == "-") b = -b;
        long D = std::stol(m[4 + o].str());
        mpz_class c = paren && m[5].matched ? mpz_class(m[5].str(), 10) : mpz_class(1);
        if (c <= 0) throw DomainError("denominator must be positive in '" + s + "'");
        return quadratic(mpq_class(a, c), mpq_class(b, c), D);
    }
    return ExactScalar(parse_decimal(s));
}

std::ostream& operator<<(std::ostream& os, const ExactScalar& x) { return os << x.str(); }

}  // namespace ietlab
