#pragma once

#include <cmath>

#include <gmpxx.h>

namespace ietlab {

// Natural log of a positive big integer without overflow.
inline double log_mpz(const mpz_class& v) {
    long e = 0;
    double m = mpz_get_d_2exp(&e, v.get_mpz_t());
    return std::log(m) + static_cast<double>(e) * std::log(2.0);
}

}  // namespace ietlab
