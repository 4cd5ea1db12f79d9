#include "ietlab/ratner.hpp"

#include <algorithm>
#include <cmath>

#include "ietlab/birkhoff.hpp"
#include "ietlab/errors.hpp"
#include "ietlab/numeric.hpp"
#include "ietlab/rng.hpp"

namespace ietlab {

const char* direction_name(Direction d) { return d == Direction::Forward ? "forward" : "backward"; }

ExactScalar dyadic(double v, int bits) {
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 2, static_cast<unsigned long>(bits));
    mpz_class num;
    mpz_set_d(num.get_mpz_t(), std::nearbyint(std::ldexp(v, bits)));
    mpq_class q(num, den);
    q.canonicalize();
    return ExactScalar(q);
}

namespace {

// Smallest dyadic rational with 60 fractional bits that is > v.
ExactScalar dyadic_up(double v) {
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 2, 60);
    mpz_class num;
    mpz_set_d(num.get_mpz_t(), std::ceil(std::ldexp(v, 60)));
    num += 1;
    mpq_class q(num, den);
    q.canonicalize();
    return ExactScalar(q);
}

// Distance from y to the endpoints of its own continuity interval.
ExactScalar endpoint_distance(const Iet& T, const ExactScalar& y) {
    int a = T.locate(y);
    ExactScalar dl = y - T.left(a);
    ExactScalar dr = T.right(a) - y;
    return dl < dr ? dl : dr;
}

ExactScalar margin_of(const Iet& T, double eps) { return dyadic(eps / 8.0) * T.total(); }

}  // namespace

ForbacReport forbac_scan(const Acceleration& acc, const ExactScalar& x, std::size_t l, std::size_t L, double eps) {
    const Iet& T = acc.base();
    const ExactScalar margin = margin_of(T, eps);
    if (x < margin || x > T.total() - margin)
        throw PreconditionError("margin", "point lies within eps/8 of an end of the interval");
    if (l + L >= acc.count()) throw DomainError("trace too short for forbac scan at level " + std::to_string(l));
    ForbacReport rep;
    rep.l = l;
    rep.orbit_length = acc.q(l).get_si();
    rep.threshold = ExactScalar(mpq_class(1) / (6 * acc.nu() * mpq_class(acc.q(l + L))));
    const Iet Tinv = T.inverse();
    ExactScalar y = x;
    rep.forward_dist = endpoint_distance(T, y);
    for (long long i = 1; i < rep.orbit_length; ++i) {
        y = T.evaluate(y);
        ExactScalar d = endpoint_distance(T, y);
        if (d < rep.forward_dist) rep.forward_dist = d;
    }
    y = x;
    for (long long i = 1; i <= rep.orbit_length; ++i) {
        y = Tinv.evaluate(y);
        ExactScalar d = endpoint_distance(T, y);
        if (i == 1 || d < rep.backward_dist) rep.backward_dist = d;
    }
    rep.forward = rep.forward_dist > rep.threshold;
    rep.backward = rep.backward_dist > rep.threshold;
    return rep;
}

EndpointSeparation endpoint_separation(const Acceleration& acc, std::size_t l, std::size_t lbar) {
    if (l + lbar >= acc.count()) throw DomainError("trace too short for level " + std::to_string(l + lbar));
    const Iet& S = acc.trace().at(acc.n(l));
    const Permutation& P = S.perm();
    const int first_bottom = P.bottom().front();
    const int last_top = P.top().back();
    EndpointSeparation rep;
    rep.l = l;
    bool have_l = false, have_r = false;
    for (std::size_t a = 0; a < S.size(); ++a) {
        for (std::size_t b = 0; b < S.size(); ++b) {
            const int ai = static_cast<int>(a), bi = static_cast<int>(b);
            if (bi != first_bottom) {
                ExactScalar d = (S.left(ai) - S.left_bottom(bi)).abs();
                if (!have_l || d < rep.min_left) rep.min_left = d;
                have_l = true;
            }
            if (ai != last_top) {
                ExactScalar d = (S.right(ai) - S.right_bottom(bi)).abs();
                if (!have_r || d < rep.min_right) rep.min_right = d;
                have_r = true;
            }
        }
    }
    rep.bound = acc.length(l + lbar) / ExactScalar(acc.nu());
    rep.holds = rep.min_left >= rep.bound && rep.min_right >= rep.bound;
    return rep;
}

IntervalUnion j_set(const Acceleration& acc, std::size_t l, std::size_t k, double xi) {
    const mpz_class q = acc.q(l);
    const double m = static_cast<double>(k + 1) * q.get_d();
    const ExactScalar rho = dyadic_up(1.0 / (m * std::pow(std::log(m), xi)));
    const long long i0 = static_cast<long long>(k) * q.get_si();
    const long long i1 = static_cast<long long>(k + 1) * q.get_si() - 1;
    return preimage_union(acc.base(), rho, i0, i1);
}

IntervalUnion j_union(const Acceleration& acc, std::size_t l, double xi) {
    mpz_class kmax = acc.q(l + 1) / acc.q(l) + 1;
    IntervalUnion out;
    for (std::size_t k = 0; k <= kmax.get_ui(); ++k) out.merge(j_set(acc, l, k, xi));
    out.normalize();
    return out;
}

GoodSet::GoodSet(const Acceleration& acc, double eps, double tau_prime, double xi, std::vector<std::size_t> levels)
    : levels_(std::move(levels)) {
    const Iet& T = acc.base();
    total_ = T.total();
    margin_ = margin_of(T, eps);
    for (std::size_t l : levels_) {
        z1_.merge(sigma_set(acc, l, tau_prime, 2).set);
        z2_.merge(j_union(acc, l, xi));
    }
    z1_.normalize();
    z2_.normalize();
    z1_measure_ = z1_.measure().to_double();
    z2_measure_ = z2_.measure().to_double();
    IntervalUnion all = z1_;
    all.merge(z2_);
    all.normalize();
    good_measure_ = all.complement_within(margin_, total_ - margin_).measure().to_double();
}

std::optional<std::string> GoodSet::excluded_by(const ExactScalar& x) const {
    if (x < margin_ || x > total_ - margin_) return std::string("margin");
    if (auto w = z1_.witness(x)) return "Z1 [" + w->lo.str() + ", " + w->hi.str() + "]";
    if (auto w = z2_.witness(x)) return "Z2 [" + w->lo.str() + ", " + w->hi.str() + "]";
    return std::nullopt;
}

double delta_formula(double eps, long long N, double l_emp) {
    const double n2 = static_cast<double>(N) * static_cast<double>(N);
    const double la = std::max({(n2 + 1.0) / std::pow(eps, 4), 1.0 / eps, l_emp});
    return std::min(1.0 / (la * la), eps * eps);
}

long long pair_scale(double gap_const, double dist) {
    if (!(dist > 0) || !(gap_const > 0)) throw DomainError("pair scale needs positive distance and gap");
    auto h = [gap_const](long long r) {
        const double rr = static_cast<double>(r);
        return 1.0 / (gap_const * rr * std::log(rr));
    };
    if (dist > h(2)) throw DomainError("pair too far apart for the distance relation");
    long long lo = 2, hi = 4;
    while (h(hi) >= dist) {
        lo = hi;
        hi *= 2;
        if (hi > (1LL << 60)) throw DomainError("pair too close for the distance relation");
    }
    // h(lo) >= dist > h(hi)
    while (hi - lo > 1) {
        long long mid = lo + (hi - lo) / 2;
        if (h(mid) >= dist) lo = mid;
        else hi = mid;
    }
    return lo;
}

namespace {

struct RoofTerm {
    double f = 0.0, df = 0.0;
};

RoofTerm roof_terms(const RoofSpec& spec, const Iet& T, const ExactScalar& x, int a) {
    const auto ai = static_cast<std::size_t>(a);
    RoofTerm t;
    t.f = spec.c0;
    const double cp = spec.cplus[ai], cm = spec.cminus[ai];
    if (cp > 0) {
        const double dl = (x - T.left(a)).to_double();
        t.f -= cp * std::log(dl);
        t.df -= cp / dl;
    }
    if (cm > 0) {
        const double dr = (T.right(a) - x).to_double();
        t.f -= cm * std::log(dr);
        t.df += cm / dr;
    }
    return t;
}

int sgn_d(long double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

struct Attempt {
    bool ok = false;
    int p = 0;
    double dev = 0.0;
    long long worst_n = 0;
    double sep = 0.0;
    std::string reason;
    long long index = 0;
};

Attempt verify_direction(const RoofSpec& spec, const Iet& T, const Iet& Tinv, const ExactScalar& x,
                         const ExactScalar& y, long long M, long long L, double eps, Direction dir) {
    Attempt at;
    const bool fwd = dir == Direction::Forward;
    ExactScalar X = x, Y = y;
    long double sx = 0, sy = 0, dx = 0, dy = 0;
    bool sign_ok = true;
    int sign_ref = 0;
    bool zero_sums = true;
    for (long long i = fwd ? 0 : 1; i <= M + L; ++i) {
        if (!fwd) {
            X = Tinv.evaluate(X);
            Y = Tinv.evaluate(Y);
        }
        const int a = T.locate(X);
        const int b = T.locate(Y);
        if (a != b || X == T.left(a)) {
            at.reason = "segment meets a discontinuity";
            at.index = fwd ? i : -i;
            return at;
        }
        const long long n = fwd ? i + 1 : i;  // number of terms after adding this point
        if (fwd && i == M + L) break;
        RoofTerm tx = roof_terms(spec, T, X, a);
        RoofTerm ty = roof_terms(spec, T, Y, a);
        sx += tx.f;
        sy += ty.f;
        dx += tx.df;
        dy += ty.df;
        if (n >= M) {
            // Birkhoff sums carry a minus sign in the backward direction.
            const long double bx = fwd ? sx : -sx, by = fwd ? sy : -sy;
            const long double bdx = fwd ? dx : -dx, bdy = fwd ? dy : -dy;
            const int s1 = sgn_d(bdx), s2 = sgn_d(bdy);
            if (s1 != 0 || s2 != 0) zero_sums = false;
            if (n == M) {
                sign_ref = s1;
                at.p = s1 == 0 ? 1 : -s1;
            }
            if (s1 != sign_ref || s2 != sign_ref || s1 == 0) {
                if (sign_ok) at.index = fwd ? n : -n;
                sign_ok = false;
            }
            const double dev = static_cast<double>(std::abs(bx - by - at.p));
            if (dev > at.dev) {
                at.dev = dev;
                at.worst_n = n;
            }
        }
        if (fwd) {
            X = T.evaluate(X);
            Y = T.evaluate(Y);
            if (n >= M) at.sep = std::max(at.sep, (Y - X).abs().to_double());
        } else if (n >= M) {
            at.sep = std::max(at.sep, (Y - X).abs().to_double());
        }
    }
    if (zero_sums) {
        at.reason = "derivative sums vanish";
        return at;
    }
    if (!sign_ok) {
        at.reason = "derivative sign changes";
        return at;
    }
    if (!(at.dev < eps)) {
        at.reason = "deviation too large";
        at.index = fwd ? at.worst_n : -at.worst_n;
        return at;
    }
    if (!(at.sep < eps)) {
        at.reason = "orbit separation too large";
        return at;
    }
    at.ok = true;
    return at;
}

}  // namespace

WitnessResult sr_pair_test(const Acceleration& acc, const DcParams& params, const RoofSpec& spec,
                           const WitnessConfig& cfg, const GoodSet& good, const ExactScalar& x, const ExactScalar& y) {
    const Iet& T = acc.base();
    spec.validate(T);
    if (!(x < y)) throw PreconditionError("order", "pair must satisfy x < y");
    const double dist = (y - x).to_double();
    if (!(dist < cfg.delta)) throw PreconditionError("delta", "pair distance is not below delta");
    if (auto e = good.excluded_by(x)) throw PreconditionError(*e, "x is outside the good set: " + *e);
    if (auto e = good.excluded_by(y)) throw PreconditionError(*e, "y is outside the good set: " + *e);

    WitnessResult w;
    w.x = x;
    w.y = y;
    const double g = std::abs(spec.gap());
    w.r = pair_scale(g > 0 ? g : 1.0, dist);
    auto lvl = acc.level_of(mpz_class(static_cast<long>(w.r)));
    if (!lvl) throw DomainError("trace too short for orbit scale r = " + std::to_string(w.r));
    w.l = *lvl;
    if (w.l + 1 + params.L >= acc.count())
        throw DomainError("trace too short beyond level " + std::to_string(w.l));
    const DcSeries series = DcSeries::from(acc);
    const bool inK = k_set_membership(series, params, w.l);
    w.case_index = inK ? 1 : 2;
    Direction primary = Direction::Forward;
    if (inK) {
        ForbacReport fb = forbac_scan(acc, x, w.l + 1, params.L, cfg.eps);
        primary = fb.forward || !fb.backward ? Direction::Forward : Direction::Backward;
    }
    const double e4 = std::pow(cfg.eps, 4);
    const long long cap = static_cast<long long>(std::floor((1.0 - e4) * acc.q(w.l + 1).get_d()));
    w.M = std::min(w.r, cap);
    w.L = std::max(static_cast<long long>(std::floor(cfg.kappa() * static_cast<double>(w.M))) + 1, cfg.N);

    const Iet Tinv = T.inverse();
    Attempt at = verify_direction(spec, T, Tinv, x, y, w.M, w.L, cfg.eps, primary);
    w.direction = primary;
    if (!at.ok) {
        const Direction other = primary == Direction::Forward ? Direction::Backward : Direction::Forward;
        Attempt alt = verify_direction(spec, T, Tinv, x, y, w.M, w.L, cfg.eps, other);
        if (alt.ok) {
            at = alt;
            w.direction = other;
            w.switched = true;
        }
    }
    w.p = at.p;
    w.max_deviation = at.dev;
    w.worst_n = at.worst_n;
    w.max_separation = at.sep;
    w.failure_index = at.index;
    w.reason = at.reason;
    const bool sizes_ok = w.M >= cfg.N && w.L >= cfg.N &&
                          static_cast<double>(w.L) >= cfg.kappa() * static_cast<double>(w.M);
    if (at.ok && !sizes_ok) w.reason = "M or L below N";
    w.verdict = at.ok && sizes_ok ? Verdict::Verified : Verdict::Failed;
    return w;
}

bool reverify_witness(const RoofSpec& spec, const Iet& T, const WitnessResult& w, double eps, mpfr_prec_t prec,
                      double* deviation) {
    const bool fwd = w.direction == Direction::Forward;
    std::vector<long long> ns;
    for (long long n = w.M; n <= w.M + w.L; ++n) ns.push_back(fwd ? n : -n);
    std::vector<Evaluation> sx = birkhoff_checkpoints(spec, T, w.x, ns, 0, prec);
    std::vector<Evaluation> sy = birkhoff_checkpoints(spec, T, w.y, ns, 0, prec);
    double worst = 0.0;
    bool ok = true;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const double dev = std::abs(sx[i].value - sy[i].value - w.p);
        const double rad = sx[i].radius + sy[i].radius;
        worst = std::max(worst, dev + rad);
        if (!(dev + rad < eps)) ok = false;
    }
    const Iet Tinv = T.inverse();
    ExactScalar X = iterate(T, Tinv, w.x, fwd ? w.M : -w.M);
    ExactScalar Y = iterate(T, Tinv, w.y, fwd ? w.M : -w.M);
    const ExactScalar e = dyadic(eps);
    for (long long n = w.M; n <= w.M + w.L; ++n) {
        if (!((Y - X).abs() < e)) ok = false;
        if (n == w.M + w.L) break;
        X = fwd ? T.evaluate(X) : Tinv.evaluate(X);
        Y = fwd ? T.evaluate(Y) : Tinv.evaluate(Y);
    }
    if (deviation) *deviation = worst;
    return ok;
}

std::vector<std::size_t> witness_levels(const Acceleration& acc, const DcParams& params, const RoofSpec& spec,
                                        const WitnessConfig& cfg) {
    const double g = std::abs(spec.gap()) > 0 ? std::abs(spec.gap()) : 1.0;
    const long long r_lo = pair_scale(g, cfg.gap * (1.0 + cfg.gap_jitter));
    const long long r_hi = pair_scale(g, cfg.gap * (1.0 - cfg.gap_jitter));
    auto l_lo = acc.level_of(mpz_class(static_cast<long>(r_lo)));
    auto l_hi = acc.level_of(mpz_class(static_cast<long>(r_hi)));
    if (!l_lo || !l_hi) throw DomainError("trace too short for the configured gap");
    const DcSeries series = DcSeries::from(acc);
    std::vector<std::size_t> out;
    for (std::size_t l = *l_lo > 1 ? *l_lo - 1 : 1; l <= *l_hi + 1; ++l) {
        if (l + params.L >= series.q.size() || l >= series.normA.size()) throw DomainError("trace too short for level " + std::to_string(l));
        if (!k_set_membership(series, params, l)) out.push_back(l);
    }
    return out;
}

std::vector<std::pair<ExactScalar, ExactScalar>> sample_pairs(const GoodSet& good, const WitnessConfig& cfg) {
    std::vector<std::pair<ExactScalar, ExactScalar>> out;
    const double lo = good.margin().to_double();
    const double hi = (good.total() - good.margin()).to_double();
    const std::uint64_t max_attempts = 1u << 20;
    for (std::size_t k = 0; k < cfg.pairs; ++k) {
        bool found = false;
        for (std::uint64_t j = 0; j < max_attempts && !found; ++j) {
            const std::uint64_t base = (static_cast<std::uint64_t>(k) << 24 | j) * 2;
            const double u = counter_uniform(cfg.seed, base);
            const double v = counter_uniform(cfg.seed, base + 1);
            const ExactScalar x = dyadic(lo + u * (hi - lo));
            const ExactScalar g = dyadic(cfg.gap * (1.0 + cfg.gap_jitter * (2.0 * v - 1.0)));
            const ExactScalar y = x + g;
            if (good.contains(x) && good.contains(y)) {
                out.emplace_back(x, y);
                found = true;
            }
        }
        if (!found) throw DomainError("good set too small to sample pair " + std::to_string(k));
    }
    return out;
}

WitnessSummary witness_experiment(const Acceleration& acc, const DcParams& params, const RoofSpec& spec,
                                  const WitnessConfig& cfg, const GoodSet& good, bool parallel) {
    const auto pairs = sample_pairs(good, cfg);
    WitnessSummary sum;
    sum.attempted = pairs.size();
    sum.results.resize(pairs.size());
    std::vector<char> conflict(pairs.size(), 0);
    const long long n = static_cast<long long>(pairs.size());
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
    for (long long i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        WitnessResult w;
        try {
            w = sr_pair_test(acc, params, spec, cfg, good, pairs[k].first, pairs[k].second);
            if (w.verdict == Verdict::Verified) {
                double dev = 0.0;
                w.reverified = reverify_witness(spec, acc.base(), w, cfg.eps, cfg.reverify_prec, &dev);
                w.reverify_deviation = dev;
                if (w.direction == Direction::Backward) {
                    const double thr = 2.0 * acc.q(w.l).get_d() * std::pow(log_mpz(acc.q(w.l)), params.xi_d());
                    ApproachStats st = approach_stats(acc.base(), w.x, acc.q(w.l + 1).get_si());
                    conflict[k] = st.U <= thr && st.V <= thr;
                }
            }
        } catch (const std::exception& e) {
            w.x = pairs[k].first;
            w.y = pairs[k].second;
            w.verdict = Verdict::Failed;
            w.reason = e.what();
        }
        sum.results[k] = std::move(w);
    }
    for (std::size_t k = 0; k < sum.results.size(); ++k) {
        const WitnessResult& w = sum.results[k];
        if (w.verdict == Verdict::Verified) ++sum.verified;
        if (w.reverified) ++sum.reverified;
        if (w.switched) ++sum.switched;
        if (conflict[k]) ++sum.direction_conflicts;
    }
    sum.rate = sum.attempted ? static_cast<double>(sum.verified) / static_cast<double>(sum.attempted) : 0.0;
    return sum;
}

}  // namespace ietlab
