#include "ietlab/birkhoff.hpp"

#include <algorithm>
#include <cmath>

#include "ietlab/errors.hpp"
#include "ietlab/numeric.hpp"

namespace ietlab {

ApproachStats approach_stats(const Iet& T, const ExactScalar& x, long long r) {
    ApproachStats st;
    if (r == 0) return st;
    const int last = static_cast<int>(T.size()) - 1;
    Iet Tinv;
    if (r < 0) Tinv = T.inverse();
    ExactScalar y = x;
    const long long n = r < 0 ? -r : r;
    for (long long k = 0; k < n; ++k) {
        long long idx = k;
        if (r < 0) {
            y = Tinv.evaluate(y);
            idx = -(k + 1);
        }
        int a = T.locate(y);
        if (y == T.left(a))
            throw SingularityTooClose(idx, "orbit hits the endpoint l_" + T.perm().label(a) + " at index " +
                                               std::to_string(idx));
        const int pos = T.perm().pos_top(a);
        if (pos > 0) {
            ExactScalar du = y - T.left(a);
            if (!st.u_dist || du < *st.u_dist) {
                st.u_dist = du;
                st.u_index = idx;
            }
        }
        if (pos < last) {
            ExactScalar dv = T.right(a) - y;
            if (!st.v_dist || dv < *st.v_dist) {
                st.v_dist = dv;
                st.v_index = idx;
            }
        }
        if (r > 0) y = T.evaluate(y);
    }
    if (st.u_dist) st.U = 1.0 / st.u_dist->to_double();
    if (st.v_dist) st.V = 1.0 / st.v_dist->to_double();
    return st;
}

double sigma_value(const mpz_class& normA, const mpz_class& q, double tau_prime) {
    if (normA < 2 || q < 2) throw DomainError("sigma needs ||A|| >= 2 and q >= 2");
    return std::pow(log_mpz(normA) / log_mpz(q), tau_prime);
}

mpq_class sigma_round_up(double sigma) {
    mpz_class num(std::ceil(sigma * 1e12) + 1.0);
    mpq_class s(num, mpz_class("1000000000000"));
    s.canonicalize();
    return s;
}

double sigma(const Acceleration& acc, std::size_t l, double tau_prime) {
    return sigma_value(acc.norm_A(l), acc.q(l), tau_prime);
}

SigmaSet sigma_set_from(const Acceleration& acc, std::size_t l, const mpq_class& sigma_up, long scale) {
    SigmaSet s;
    s.l = l;
    s.sigma = sigma_up.get_d();
    s.sigma_up = sigma_up;
    const mpq_class& nu = acc.nu();
    s.bound = 2 * static_cast<long>(acc.base().size()) * nu * nu * sigma_up * sigma_up * mpq_class(acc.norm_A(l));
    if (sgn(sigma_up) <= 0) {
        s.measure = ExactScalar(0);
        s.bound_holds = true;
        return s;
    }
    s.radius = ExactScalar(mpq_class(sigma_up * scale)) * acc.length(l);
    mpq_class top = sigma_up * mpq_class(acc.q(l + 1));
    mpz_class c = top.get_num() / top.get_den();
    if (c * top.get_den() != top.get_num()) ++c;
    s.preimages = c.get_si();
    s.set = preimage_union(acc.base(), s.radius, 0, s.preimages);
    s.measure = s.set.measure();
    s.bound_holds = s.measure <= ExactScalar(s.bound);
    return s;
}

SigmaSet sigma_set(const Acceleration& acc, std::size_t l, double tau_prime, long scale) {
    double sg = sigma(acc, l, tau_prime);
    SigmaSet s = sigma_set_from(acc, l, sigma_round_up(sg), scale);
    s.sigma = sg;
    return s;
}

namespace {

std::string interval_str(const Interval& iv) { return "[" + iv.lo.str() + ", " + iv.hi.str() + "]"; }

GrowthReport assess(const RoofSpec& spec, long long r, const Evaluation& S, const ApproachStats& st, double M,
                    double tol) {
    GrowthReport g;
    g.r = r;
    g.S = S.value;
    g.S_radius = S.radius;
    const double rr = static_cast<double>(r < 0 ? -r : r);
    g.rlogr = rr * std::log(rr);
    g.ratio = g.S / g.rlogr;
    const double gap = spec.gap();
    const double o = gap < 0 ? -1.0 : 1.0;
    const double ag = std::abs(gap);
    g.oriented_ratio = g.ratio * o;
    g.U = st.U;
    g.V = st.V;
    g.M = M;
    const double So = g.S * o;
    g.lower_ok = So + S.radius >= (ag - tol) * g.rlogr;
    const bool tight_upper = So - S.radius <= (ag + tol) * g.rlogr;
    g.upper_ok = So - S.radius <= (ag + tol) * g.rlogr + M * (st.U + st.V);
    g.used_UV_slack = g.upper_ok && !tight_upper;
    g.within_mpd_bounds = g.lower_ok && g.upper_ok;
    g.in_band = std::abs(g.oriented_ratio - ag) <= tol;
    return g;
}

double default_M(const RoofSpec& spec, const GrowthConfig& cfg) {
    if (cfg.M) return *cfg.M;
    return 4.0 * std::max({spec.total_plus(), spec.total_minus(), 1.0});
}

}  // namespace

std::vector<GrowthReport> derivative_growth_series(const RoofSpec& spec, const Iet& T, const ExactScalar& x,
                                                   const std::vector<long long>& rs,
                                                   const std::vector<const SigmaSet*>& excluded,
                                                   const GrowthConfig& cfg) {
    if (excluded.size() != rs.size()) throw DomainError("one excluded set per r is required");
    for (const SigmaSet* s : excluded) {
        if (!s) continue;
        if (auto w = s->set.witness(x))
            throw PreconditionError("Sigma_" + std::to_string(s->l) + " " + interval_str(*w),
                                    "point lies in the excluded set Sigma_" + std::to_string(s->l) + " via " +
                                        interval_str(*w));
    }
    for (long long r : rs)
        if (r < 2) throw DomainError("growth check needs r >= 2");
    std::vector<Evaluation> sums = birkhoff_checkpoints(spec, T, x, rs, 1);
    const double M = default_M(spec, cfg);
    std::vector<GrowthReport> out;
    for (std::size_t i = 0; i < rs.size(); ++i) {
        ApproachStats st = approach_stats(T, x, rs[i]);
        out.push_back(assess(spec, rs[i], sums[i], st, M, cfg.tolerance));
    }
    return out;
}

GrowthReport derivative_growth_check(const RoofSpec& spec, const Iet& T, const ExactScalar& x, long long r,
                                     const SigmaSet& excluded, const GrowthConfig& cfg) {
    return derivative_growth_series(spec, T, x, {r}, {&excluded}, cfg).front();
}

namespace {

std::vector<long long> r_grid(long long lo, long long hi, std::size_t points) {
    std::vector<long long> g;
    if (hi <= lo) return g;
    if (points < 2) points = 2;
    const double a = std::log(static_cast<double>(lo));
    const double b = std::log(static_cast<double>(hi - 1));
    for (std::size_t i = 0; i < points; ++i) {
        double t = static_cast<double>(i) / static_cast<double>(points - 1);
        long long r = std::llround(std::exp(a + (b - a) * t));
        r = std::clamp(r, lo, hi - 1);
        if (g.empty() || r > g.back()) g.push_back(r);
    }
    return g;
}

double max_deviation(const RoofSpec& spec, const std::vector<Evaluation>& sums, const std::vector<long long>& grid,
                     double sign) {
    const double o = spec.gap() < 0 ? -1.0 : 1.0;
    const double ag = std::abs(spec.gap());
    double dev = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = static_cast<double>(grid[i]);
        dev = std::max(dev, std::abs(sign * o * sums[i].value / (r * std::log(r)) - ag));
    }
    return dev;
}

}  // namespace

PrtyReport prty_conditions(const Acceleration& acc, const RoofSpec& spec, const ExactScalar& x, std::size_t l,
                           double xi, double tolerance, std::size_t grid_points) {
    PrtyReport rep;
    const double lq = log_mpz(acc.q(l));
    rep.threshold = 2.0 * acc.q(l).get_d() * std::pow(lq, xi);
    const long long q0 = acc.q(l).get_si();
    const long long q1 = acc.q(l + 1).get_si();
    rep.grid = r_grid(std::max(q0, 2LL), q1, grid_points);
    const Iet& T = acc.base();

    ApproachStats fw = approach_stats(T, x, q1);
    rep.forward_U = fw.U;
    rep.forward_V = fw.V;
    rep.forward_hypothesis = fw.U <= rep.threshold && fw.V <= rep.threshold;

    ExactScalar back = iterate(T, T.inverse(), x, -q1);
    ApproachStats bw = approach_stats(T, back, q1);
    rep.backward_U = bw.U;
    rep.backward_V = bw.V;
    rep.backward_hypothesis = bw.U <= rep.threshold && bw.V <= rep.threshold;

    rep.forward_ok = true;
    rep.backward_ok = true;
    if (rep.forward_hypothesis && !rep.grid.empty()) {
        auto sums = birkhoff_checkpoints(spec, T, x, rep.grid, 1);
        rep.forward_max_dev = max_deviation(spec, sums, rep.grid, 1.0);
        rep.forward_ok = rep.forward_max_dev <= tolerance;
    }
    if (rep.backward_hypothesis && !rep.grid.empty()) {
        std::vector<long long> neg;
        for (long long r : rep.grid) neg.push_back(-r);
        auto sums = birkhoff_checkpoints(spec, T, x, neg, 1);
        rep.backward_max_dev = max_deviation(spec, sums, rep.grid, -1.0);
        rep.backward_ok = rep.backward_max_dev <= tolerance;
    }
    return rep;
}

RatioTrends ratio_trends(const Acceleration& acc, std::size_t l_max, double tau, double tau_prime, double xi,
                         double eta) {
    RatioTrends t;
    for (std::size_t l = 1; l <= l_max && l < acc.norm_count(); ++l) {
        const double s = sigma(acc, l, tau_prime);
        const double lq = log_mpz(acc.q(l));
        t.nr1.push_back(s * std::pow(lq, xi));
        t.nr2.push_back(std::pow(s, 2.0 - eta) * std::pow(static_cast<double>(l), tau));
        t.nr3.push_back(log_mpz(acc.norm_A(l)) / (std::pow(lq, xi) * std::pow(s, eta)));
    }
    return t;
}

}  // namespace ietlab
