#include "ietlab/real.hpp"

#include <vector>

namespace ietlab {

mpfr_prec_t default_precision() {
    static const mpfr_prec_t prec = [] {
        const char* env = std::getenv("IETLAB_PRECISION");
        if (env != nullptr) {
            long v = std::strtol(env, nullptr, 10);
            if (v >= 53 && v <= 100000) return static_cast<mpfr_prec_t>(v);
        }
        return static_cast<mpfr_prec_t>(128);
    }();
    return prec;
}

std::string Real::str(int digits) const {
    std::vector<char> buf(static_cast<std::size_t>(digits) + 32);
    mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, v_);
    return std::string(buf.data());
}

Real log(const Real& x) {
    Real r(x.precision());
    mpfr_log(r.get(), x.get(), MPFR_RNDN);
    return r;
}

Real abs(const Real& x) {
    Real r(x.precision());
    mpfr_abs(r.get(), x.get(), MPFR_RNDN);
    return r;
}

}  // namespace ietlab
