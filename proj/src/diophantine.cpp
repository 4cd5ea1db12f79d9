#include "ietlab/diophantine.hpp"

#include <algorithm>
#include <cmath>

#include "ietlab/birkhoff.hpp"
#include "ietlab/errors.hpp"
#include "ietlab/numeric.hpp"
#include "ietlab/real.hpp"

namespace ietlab {

long floor_log(const mpq_class& x, std::size_t d) {
    if (sgn(x) <= 0) throw DomainError("log of a non-positive number");
    if (d < 2) throw DomainError("log base must be at least 2");
    const mpq_class base(static_cast<unsigned long>(d));
    long k = 0;
    mpq_class p(1);
    if (x >= 1) {
        while (p * base <= x) {
            p *= base;
            ++k;
        }
    } else {
        while (p > x) {
            p /= base;
            --k;
        }
    }
    return k;
}

std::size_t window_length(std::size_t lbar, const mpq_class& nu, std::size_t d) {
    long k = floor_log(2 * nu * nu, d);
    if (k < 0) k = 0;
    return lbar * static_cast<std::size_t>(1 + k);
}

std::optional<std::string> first_violation(const ParamCandidate& c, ParamWindow window) {
    const mpq_class one(1);
    if (!(c.tau > one && c.tau < mpq_class(16, 15))) return "tau in (1, 16/15)";
    if (!(c.tau_prime > mpq_class(15, 16) && c.tau_prime < one)) return "tau' in (15/16, 1)";
    const mpq_class eta_hi = window == ParamWindow::Final ? mpq_class(2 * c.tau_prime - c.tau)
                                                          : mpq_class(c.tau_prime * (2 * c.tau_prime - c.tau));
    if (!(c.eta > mpq_class(3, 4))) return "eta > 3/4";
    if (!(c.eta < eta_hi))
        return window == ParamWindow::Final ? "eta < 2 tau' - tau" : "eta < tau' (2 tau' - tau)";
    const mpq_class floor_xi = window == ParamWindow::Final ? mpq_class(99, 100) : mpq_class(11, 12);
    const mpq_class te = c.tau_prime * c.eta;
    const mpq_class xi_lo = te > floor_xi ? te : floor_xi;
    if (!(c.xi > xi_lo))
        return window == ParamWindow::Final ? "xi > max(99/100, tau' eta)" : "xi > max(11/12, tau' eta)";
    if (!(c.xi < c.tau_prime)) return "xi < tau'";
    return std::nullopt;
}

DcParams validate_params(const ParamCandidate& c, const mpq_class& nu, std::size_t lbar, std::size_t d,
                         ParamWindow window) {
    if (auto v = first_violation(c, window)) throw ConstraintViolation(*v, "parameter constraint violated: " + *v);
    if (nu < 1) throw ConstraintViolation("nu >= 1", "parameter constraint violated: nu >= 1");
    if (lbar < 1) throw ConstraintViolation("lbar >= 1", "parameter constraint violated: lbar >= 1");
    if (d < 2) throw ConstraintViolation("d >= 2", "parameter constraint violated: d >= 2");
    DcParams p;
    p.tau = c.tau;
    p.tau_prime = c.tau_prime;
    p.eta = c.eta;
    p.xi = c.xi;
    p.nu = nu;
    p.lbar = lbar;
    p.d = d;
    p.L = window_length(lbar, nu, d);
    p.window = window;
    return p;
}

DcSeries DcSeries::from(const Acceleration& acc) {
    DcSeries s;
    for (std::size_t l = 0; l < acc.count(); ++l) s.q.push_back(acc.q(l));
    for (std::size_t l = 0; l < acc.norm_count(); ++l) s.normA.push_back(acc.norm_A(l));
    return s;
}

MixingDcReport mixing_dc_report(const Acceleration& acc, const DcParams& params, std::size_t depth,
                                double threshold) {
    MixingDcReport rep;
    rep.threshold = threshold;
    const std::size_t lbar = params.lbar;
    if (depth < lbar || acc.count() < lbar + 1) {
        rep.insufficient_depth = true;
        return rep;
    }
    rep.levels = std::min(depth + 1, acc.count());
    rep.all_balanced = true;
    rep.all_positive = true;
    for (std::size_t l = 0; l < rep.levels; ++l) {
        bool b = balance_check(acc.trace(), acc.n(l), params.nu);
        rep.balanced.push_back(b);
        rep.all_balanced = rep.all_balanced && b;
        if (l + lbar < acc.count()) {
            IntMatrix W = acc.trace().product(acc.n(l), acc.n(l + lbar));
            bool pos = W.positive();
            rep.window_positive.push_back(pos);
            rep.all_positive = rep.all_positive && pos;
            rep.D = pos ? std::max(rep.D, projective_diameter(W)) : INFINITY;
        }
    }
    const double tau = params.tau_d();
    for (std::size_t l = 1; l < rep.levels && l < acc.norm_count(); ++l)
        rep.integrability.push_back(acc.norm_A(l).get_d() / std::pow(static_cast<double>(l), tau));
    std::size_t from = rep.integrability.size();
    while (from > 0 && rep.integrability[from - 1] < threshold) --from;
    if (from < rep.integrability.size()) rep.below_from = from + 1;
    return rep;
}

mpz_class window_norm_product(const DcSeries& s, std::size_t l, std::size_t L) {
    mpz_class p(1);
    for (std::size_t k = l; k <= l + L; ++k) p *= s.normA.at(k);
    return p;
}

namespace {

// Compares an exact positive integer with l^xi; returns sign(prod - l^xi).
int compare_power(const mpz_class& prod, std::size_t l, const mpq_class& xi, mpfr_prec_t prec) {
    if (l == 1) return cmp(prod, 1) > 0 ? 1 : (prod == 1 ? 0 : -1);
    Real e(prec), lg(prec);
    mpfr_set_q(e.get(), xi.get_mpq_t(), MPFR_RNDN);
    mpfr_set_ui(lg.get(), static_cast<unsigned long>(l), MPFR_RNDN);
    mpfr_log(lg.get(), lg.get(), MPFR_RNDN);
    lg *= e;
    mpfr_exp(lg.get(), lg.get(), MPFR_RNDN);
    Real p(prec);
    mpfr_set_z(p.get(), prod.get_mpz_t(), MPFR_RNDN);
    Real diff = p - lg;
    Real tol(prec);
    mpfr_mul_2si(tol.get(), lg.get(), -static_cast<long>(prec) + 8, MPFR_RNDU);
    if (!(abs(diff) > tol))
        throw IndeterminateComparison("cannot decide ||A|| product vs l^xi at l = " + std::to_string(l) +
                                      " with " + std::to_string(prec) + " bits");
    return diff.sign();
}

}  // namespace

RatnerDcPartial ratner_dc_partial(const DcSeries& s, const DcParams& params, std::size_t depth, mpfr_prec_t prec) {
    RatnerDcPartial out;
    const double eta = params.eta_d();
    for (std::size_t l = 1; l <= depth; ++l) {
        if (l + params.L >= s.normA.size() || l >= s.q.size()) break;
        out.horizon = l;
        mpz_class prod = window_norm_product(s, l, params.L);
        if (compare_power(prod, l, params.xi, prec) > 0) {
            out.bad_indices.push_back(l);
            out.partial_sum += 1.0 / std::pow(log_mpz(s.q[l]), eta);
        }
        out.running_sum.push_back(out.partial_sum);
    }
    return out;
}

double series_sigma(const DcSeries& s, std::size_t l, double tau_prime) {
    if (s.normA.at(l) == 1) return 0.0;
    return sigma_value(s.normA.at(l), s.q.at(l), tau_prime);
}

bool k_set_membership(const DcSeries& s, const DcParams& params, std::size_t l, mpfr_prec_t prec) {
    if (l + params.L >= s.q.size() || l >= s.normA.size())
        throw DomainError("series too short for K_T membership at l = " + std::to_string(l));
    const mpz_class& ql = s.q[l];
    const mpz_class& qL = s.q[l + params.L];
    if (qL <= ql) return true;
    if (s.normA[l] == 1) return true;
    if (ql < 2) throw DomainError("K_T membership needs q_l >= 2");
    Real la(prec), lq(prec), ex(prec);
    mpfr_set_z(la.get(), s.normA[l].get_mpz_t(), MPFR_RNDN);
    mpfr_log(la.get(), la.get(), MPFR_RNDN);
    mpfr_set_z(lq.get(), ql.get_mpz_t(), MPFR_RNDN);
    mpfr_log(lq.get(), lq.get(), MPFR_RNDN);
    Real ratio = la / lq;
    mpq_class exq = params.tau_prime * params.xi;
    mpfr_set_q(ex.get(), exq.get_mpq_t(), MPFR_RNDN);
    mpfr_pow(ratio.get(), ratio.get(), ex.get(), MPFR_RNDN);
    Real lhs(prec);
    mpfr_set_z(lhs.get(), qL.get_mpz_t(), MPFR_RNDN);
    lhs *= ratio;
    Real rhs(prec);
    mpfr_set_z(rhs.get(), ql.get_mpz_t(), MPFR_RNDN);
    Real diff = lhs - rhs;
    Real tol(prec);
    mpfr_mul_2si(tol.get(), lhs.get(), -static_cast<long>(prec) + 12, MPFR_RNDU);
    if (!(abs(diff) > tol))
        throw IndeterminateComparison("cannot decide K_T membership at l = " + std::to_string(l) + " with " +
                                      std::to_string(prec) + " bits");
    return diff.sign() < 0;
}

double sigma_set_measure_fast(const Iet& T, double radius, long long preimages) {
    if (radius <= 0) return 0.0;
    const Iet Tinv = T.inverse();
    const IetView v(Tinv);
    const double total = T.total().to_double();
    auto right_of = [&](int pos) {
        return static_cast<std::size_t>(pos) + 1 < v.lefts.size() ? v.lefts[static_cast<std::size_t>(pos) + 1]
                                                                 : total;
    };
    std::vector<std::pair<double, double>> all;
    for (std::size_t a = 0; a < T.size(); ++a) {
        const double c = T.left(static_cast<int>(a)).to_double();
        std::vector<std::pair<double, double>> cur;
        double lo = c - radius, hi = c + radius;
        if (lo < 0) {
            cur.emplace_back(total + lo, total);
            lo = 0;
        }
        if (hi > total) {
            cur.emplace_back(0.0, hi - total);
            hi = total;
        }
        cur.emplace_back(lo, hi);
        for (long long i = 0; i <= preimages; ++i) {
            all.insert(all.end(), cur.begin(), cur.end());
            if (i == preimages) break;
            std::vector<std::pair<double, double>> next;
            for (auto [l0, h0] : cur) {
                double s = l0;
                while (s < h0) {
                    int pos = v.locate_pos(s);
                    double e = std::min(h0, right_of(pos));
                    double sh = v.shifts[static_cast<std::size_t>(pos)];
                    next.emplace_back(s + sh, e + sh);
                    s = e;
                }
            }
            cur = std::move(next);
        }
    }
    std::sort(all.begin(), all.end());
    double m = 0.0, cl = -INFINITY, ch = -INFINITY;
    for (auto [l0, h0] : all) {
        if (l0 > ch) {
            if (ch > cl) m += ch - cl;
            cl = l0;
            ch = h0;
        } else if (h0 > ch) {
            ch = h0;
        }
    }
    if (ch > cl) m += ch - cl;
    return m;
}

SummabilityPartial summability_partial(const Acceleration& acc, const DcParams& params, std::size_t depth,
                                       std::size_t exact_max_level, mpfr_prec_t prec) {
    SummabilityPartial out;
    const DcSeries s = DcSeries::from(acc);
    const double tp = params.tau_prime_d();
    const double eta = params.eta_d();
    for (std::size_t l = 1; l <= depth; ++l) {
        if (l + params.L >= s.q.size() || l + 1 >= acc.count()) break;
        out.horizon = l;
        if (k_set_membership(s, params, l, prec)) {
            out.members.push_back(l);
        } else {
            out.outside.push_back(l);
            const double sg = series_sigma(s, l, tp);
            out.sum_sigma_eta += std::pow(sg, eta);
            double measure = 0.0;
            double bound = 0.0;
            if (sg > 0) {
                if (l <= exact_max_level) {
                    SigmaSet ss = sigma_set(acc, l, tp);
                    measure = ss.measure.to_double();
                    bound = ss.bound.get_d();
                    ++out.exact_levels;
                } else {
                    mpq_class up = sigma_round_up(sg);
                    double radius = up.get_d() * acc.length(l).to_double();
                    mpq_class top = up * mpq_class(acc.q(l + 1));
                    long long pre = static_cast<long long>(std::ceil(top.get_d()));
                    measure = sigma_set_measure_fast(acc.base(), radius, pre);
                    const double nu = params.nu.get_d();
                    bound = 2.0 * static_cast<double>(acc.base().size()) * nu * nu * up.get_d() * up.get_d() *
                            acc.norm_A(l).get_d();
                }
            }
            out.sum_measures += measure;
            out.sum_bounds += bound;
        }
        out.running_sigma_eta.push_back(out.sum_sigma_eta);
        out.running_measures.push_back(out.sum_measures);
    }
    return out;
}

}  // namespace ietlab
