#pragma once

#include <cstdlib>
#include <string>
#include <utility>

#include <mpfr.h>

#include "ietlab/exact.hpp"

namespace ietlab {

// Working precision in bits; IETLAB_PRECISION overrides the default of 128.
mpfr_prec_t default_precision();

// Owning MPFR value with explicit precision.
class Real {
public:
    explicit Real(mpfr_prec_t prec = default_precision()) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
    Real(double x, mpfr_prec_t prec) : Real(prec) { mpfr_set_d(v_, x, MPFR_RNDN); }
    Real(const ExactScalar& x, mpfr_prec_t prec) : Real(prec) { x.to_mpfr(v_); }
    Real(const Real& o) : Real(mpfr_get_prec(o.v_)) { mpfr_set(v_, o.v_, MPFR_RNDN); }
    Real(Real&& o) noexcept : Real(mpfr_get_prec(o.v_)) { mpfr_swap(v_, o.v_); }
    Real& operator=(const Real& o) {
        if (this != &o) mpfr_set(v_, o.v_, MPFR_RNDN);
        return *this;
    }
    Real& operator=(Real&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Real() { mpfr_clear(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    std::string str(int digits = 20) const;

    Real& operator+=(const Real& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator-=(const Real& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator*=(const Real& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator/=(const Real& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }

    friend Real operator+(Real l, const Real& r) { return l += r; }
    friend Real operator-(Real l, const Real& r) { return l -= r; }
    friend Real operator*(Real l, const Real& r) { return l *= r; }
    friend Real operator/(Real l, const Real& r) { return l /= r; }
    friend bool operator<(const Real& l, const Real& r) { return mpfr_less_p(l.v_, r.v_) != 0; }
    friend bool operator>(const Real& l, const Real& r) { return mpfr_greater_p(l.v_, r.v_) != 0; }

    int sign() const { return mpfr_sgn(v_); }

private:
    mpfr_t v_;
};

Real log(const Real& x);
Real abs(const Real& x);

}  // namespace ietlab
