// Acceptance runner: prints one PASS/FAIL line per criterion and exits non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ietlab/accel.hpp"
#include "ietlab/birkhoff.hpp"
#include "ietlab/diophantine.hpp"
#include "ietlab/errors.hpp"
#include "ietlab/fixtures.hpp"
#include "ietlab/mixing.hpp"
#include "ietlab/ratner.hpp"
#include "ietlab/rauzy_veech.hpp"
#include "ietlab/rng.hpp"
#include "oracles.hpp"

using namespace ietlab;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

template <class... T>
std::string fmt(const char* f, T... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// Random rational IET normalised to total length 1.
Iet unit_iet(std::size_t d, std::uint64_t idx) {
    const Iet T = oracle::random_rational_iet(d, 1001, idx, 1000);
    std::vector<ExactScalar> lam = T.lengths();
    const ExactScalar tot = T.total();
    for (auto& v : lam) v = v / tot;
    return Iet(T.perm(), lam);
}

std::vector<Iet> random_iets() {
    std::vector<Iet> out;
    for (std::size_t d : {3u, 4u})
        for (std::uint64_t i = 0; i < 50; ++i) out.push_back(unit_iet(d, d * 1000 + i));
    return out;
}

const Acceleration& golden_acc() {
    static const Acceleration acc = Acceleration::build(golden_rotation(), 80, mpq_class(3), 8);
    return acc;
}

const Acceleration& bounded_acc() {
    static const Acceleration acc = Acceleration::build(bounded_type_three(), 200, mpq_class(3), 8);
    return acc;
}

const ParamCandidate kParams{mpq_class(101, 100), mpq_class(199, 200), mpq_class(9, 10), mpq_class(124, 125)};

DcParams params_for(const Acceleration& acc) {
    return validate_params(kParams, acc.nu(), acc.lbar(), acc.base().size());
}

Outcome c1_cocycle() {
    std::size_t steps = 0, failures = 0, stopped = 0;
    for (const Iet& T : random_iets()) {
        InductionTrace tr(T);
        if (tr.extend_until(25) < 25) ++stopped;
        std::vector<mpz_class> ones(T.size(), 1);
        for (std::size_t n = 0; n <= tr.depth(); ++n, ++steps) {
            const IntMatrix& B = tr.product(n);
            if (B.apply(tr.at(n).lengths()) != T.lengths()) ++failures;
            if (B.transpose().apply(ones) != tr.heights(n)) ++failures;
        }
    }
    return {failures == 0, fmt("%zu (IET, depth) pairs, %zu traces stopped early, %zu mismatches", steps, stopped, failures)};
}

Outcome c2_return_times() {
    std::size_t checked = 0, failures = 0;
    for (const Iet& T : random_iets()) {
        InductionTrace tr(T);
        tr.extend_until(25);
        for (std::size_t n = 5; n <= tr.depth(); n += 5) {
            const Iet& Tn = tr.at(n);
            const auto h = tr.heights(n);
            for (std::size_t a = 0; a < T.size(); ++a) {
                const int ai = static_cast<int>(a);
                const ExactScalar mid = Tn.left(ai) + Tn.length(ai) / ExactScalar(2);
                const std::size_t rt = oracle::return_time(T, mid, Tn.total());
                ++checked;
                if (mpz_class(static_cast<unsigned long>(rt)) != h[a]) ++failures;
            }
        }
    }
    return {failures == 0 && checked > 0, fmt("%zu towers checked, %zu mismatches", checked, failures)};
}

Outcome c3_partitions() {
    std::size_t systems = 0, failures = 0;
    for (const Iet& T : random_iets()) {
        InductionTrace tr(T);
        tr.extend_until(25);
        for (std::size_t n = 0; n <= tr.depth(); ++n) {
            const TowerSystem ts = towers(tr, n);
            std::vector<Floor> fl = ts.floors;
            std::sort(fl.begin(), fl.end(), [](const Floor& a, const Floor& b) { return a.left < b.left; });
            ExactScalar sum;
            bool ok = true;
            for (std::size_t i = 0; i < fl.size(); ++i) {
                sum += fl[i].right - fl[i].left;
                if (i + 1 < fl.size() && fl[i + 1].left < fl[i].right) ok = false;
            }
            // Each floor is the image of the one below it.
            for (std::size_t i = 0; i + 1 < ts.floors.size(); ++i)
                if (ts.floors[i + 1].letter == ts.floors[i].letter && ts.floors[i + 1].level == ts.floors[i].level + 1 &&
                    ts.floors[i + 1].left != oracle::apply_by_definition(T, ts.floors[i].left))
                    ok = false;
            ++systems;
            if (!ok || sum != ExactScalar(1)) ++failures;
        }
    }
    return {failures == 0, fmt("%zu tower systems, %zu failures", systems, failures)};
}

Outcome c4_fibonacci() {
    const Iet G = golden_rotation();
    InductionTrace tr(G);
    tr.extend(25);
    std::vector<mpz_class> F{0, 1};
    while (F.size() < 30) F.push_back(F[F.size() - 1] + F[F.size() - 2]);
    std::size_t failures = 0;
    for (std::size_t n = 1; n <= 25; ++n) {
        auto h = tr.heights(n);
        std::sort(h.begin(), h.end());
        if (h[0] != F[n + 1] || h[1] != F[n + 2]) ++failures;
        const Iet& Tn = tr.at(n);
        for (std::size_t a = 0; a < 2; ++a) {
            const int ai = static_cast<int>(a);
            const ExactScalar mid = Tn.left(ai) + Tn.length(ai) / ExactScalar(2);
            if (mpz_class(static_cast<unsigned long>(oracle::return_time(G, mid, Tn.total()))) != tr.heights(n)[a])
                ++failures;
        }
    }
    return {failures == 0, fmt("heights {F_(n+1), F_(n+2)} for n = 1..25, %zu mismatches", failures)};
}

// Product of a random run of Rauzy-Veech step matrices from a random trace.
IntMatrix random_cocycle(std::size_t d, std::uint64_t seed, std::uint64_t k, std::size_t min_len, std::size_t max_len) {
    const Iet T = oracle::random_rational_iet(d, seed, k, 1000003);
    InductionTrace tr(T);
    const std::size_t len = min_len + counter_random(seed, 4 * k + 1) % (max_len - min_len + 1);
    tr.extend_until(len);
    return tr.product(tr.depth());
}

std::vector<mpq_class> random_simplex_point(std::size_t d, std::uint64_t seed, std::uint64_t k) {
    std::vector<mpq_class> v;
    for (std::size_t i = 0; i < d; ++i) v.emplace_back(1 + static_cast<long>(counter_random(seed, k * 8 + i) % 10000), 10000);
    return v;
}

std::vector<mpq_class> apply_q(const IntMatrix& A, const std::vector<mpq_class>& v) {
    std::vector<mpq_class> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) out[i] += mpq_class(A(i, j)) * v[j];
    return out;
}

std::vector<double> to_d(const std::vector<mpq_class>& v) {
    std::vector<double> o;
    for (const auto& x : v) o.push_back(x.get_d());
    return o;
}

// Determinant of a small dense matrix by Gaussian elimination.
double det_d(std::vector<std::vector<double>> m) {
    const std::size_t n = m.size();
    double det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(m[r][c]) > std::abs(m[p][c])) p = r;
        if (m[p][c] == 0) return 0;
        if (p != c) {
            std::swap(m[p], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = m[r][c] / m[c][c];
            for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
        }
    }
    return det;
}

Outcome c5_hilbert() {
    std::size_t contraction_fail = 0, strict_checked = 0;
    for (std::uint64_t k = 0; k < 10000; ++k) {
        const IntMatrix A = random_cocycle(3 + k % 2, 51, k, 1, 20);
        const std::size_t d = A.size();
        const auto x = random_simplex_point(d, 52, 2 * k), y = random_simplex_point(d, 52, 2 * k + 1);
        const mpq_class before = hilbert_ratio(x, y), after = hilbert_ratio(apply_q(A, x), apply_q(A, y));
        if (after > before) ++contraction_fail;
        if (A.positive() && before > 1) {
            ++strict_checked;
            if (!(after < before)) ++contraction_fail;
        }
    }
    // Jacobian of the projective action in affine coordinates against central differences.
    double worst_jac = 0;
    for (std::uint64_t k = 0; k < 200; ++k) {
        const IntMatrix D = random_cocycle(3 + k % 2, 53, k, 3, 9);
        const std::size_t d = D.size();
        const double detD = std::abs(D.determinant().get_d());
        const auto lam = to_d(random_simplex_point(d, 54, k));
        double s = 0;
        for (double v : lam) s += v;
        std::vector<double> p(d - 1);
        for (std::size_t i = 0; i + 1 < d; ++i) p[i] = lam[i] / s;
        auto psi = [&](const std::vector<double>& q) {
            std::vector<double> full(q);
            double rest = 1;
            for (double v : q) rest -= v;
            full.push_back(rest);
            auto img = D.apply(full);
            double t = 0;
            for (double v : img) t += v;
            std::vector<double> o(d - 1);
            for (std::size_t i = 0; i + 1 < d; ++i) o[i] = img[i] / t;
            return o;
        };
        // Richardson-extrapolated central differences, O(h^4).
        auto column = [&](std::size_t c, double h) {
            std::vector<double> a = p, b = p;
            a[c] += h;
            b[c] -= h;
            auto fa = psi(a), fb = psi(b);
            std::vector<double> o(d - 1);
            for (std::size_t r = 0; r + 1 < d; ++r) o[r] = (fa[r] - fb[r]) / (2 * h);
            return o;
        };
        std::vector<std::vector<double>> J(d - 1, std::vector<double>(d - 1));
        const double h = 1e-3 * *std::min_element(p.begin(), p.end());
        for (std::size_t c = 0; c + 1 < d; ++c) {
            auto c1 = column(c, h), c2 = column(c, h / 2);
            for (std::size_t r = 0; r + 1 < d; ++r) J[r][c] = (4 * c2[r] - c1[r]) / 3;
        }
        std::vector<double> pl(p);
        double rest = 1;
        for (double v : p) rest -= v;
        pl.push_back(rest);
        const double formula = detD * jacobian(D, pl);
        worst_jac = std::max(worst_jac, std::abs(std::abs(det_d(J)) / formula - 1));
    }
    std::size_t distortion_fail = 0, distortion_checked = 0;
    for (std::uint64_t k = 0; distortion_checked < 10000; ++k) {
        const IntMatrix C = random_cocycle(3 + k % 2, 55, k % 997, 12, 30);
        if (!C.positive()) continue;
        const std::size_t d = C.size();
        ++distortion_checked;
        const double bound = std::pow(nu_col(C).get_d(), static_cast<double>(d)) * (1 + 1e-12);
        const auto x = to_d(random_simplex_point(d, 56, 2 * k)), y = to_d(random_simplex_point(d, 56, 2 * k + 1));
        double sx = 0, sy = 0;
        for (std::size_t i = 0; i < d; ++i) {
            sx += x[i];
            sy += y[i];
        }
        std::vector<double> xs(x), ys(y);
        for (std::size_t i = 0; i < d; ++i) {
            xs[i] /= sx;
            ys[i] /= sy;
        }
        if (jacobian(C, xs) / jacobian(C, ys) > bound) ++distortion_fail;
    }
    std::size_t nu_fail = 0, nu_checked = 0;
    for (std::uint64_t k = 0; nu_checked < 1000; ++k) {
        const std::size_t d = 3 + k % 2;
        const IntMatrix D = random_cocycle(d, 57, k, 12, 30);
        if (!D.positive()) continue;
        const IntMatrix C = random_cocycle(d, 58, k, 1, 15);
        ++nu_checked;
        if (nu_col(C * D) > nu_col(D)) ++nu_fail;
    }
    const bool pass = contraction_fail == 0 && worst_jac <= 1e-6 && distortion_fail == 0 && distortion_checked >= 10000 &&
                      nu_fail == 0 && nu_checked >= 1000;
    return {pass, fmt("contraction failures %zu (strict checks %zu); worst Jacobian rel. error %.2e; distortion "
                      "failures %zu of %zu; nu_col failures %zu of %zu",
                      contraction_fail, strict_checked, worst_jac, distortion_fail, distortion_checked, nu_fail,
                      nu_checked)};
}

Outcome c6_sigma_bound() {
    std::size_t checked = 0, failures = 0;
    std::string worst;
    double worst_ratio = 0;
    for (const Acceleration* acc : {&golden_acc(), &bounded_acc()}) {
        for (std::size_t l = 1; l <= 15; ++l) {
            if (acc->q(l) < 2 || acc->norm_A(l) < 2) continue;
            const SigmaSet s = sigma_set(*acc, l, 0.995);
            ++checked;
            if (!s.bound_holds) ++failures;
            const double r = s.measure.to_double() / s.bound.get_d();
            if (r > worst_ratio) {
                worst_ratio = r;
                worst = fmt("d=%zu l=%zu", acc->base().size(), l);
            }
        }
    }
    return {failures == 0 && checked >= 28,
            fmt("%zu levels, %zu violations, largest measure/bound %.3f at %s", checked, failures, worst_ratio,
                worst.c_str())};
}

Outcome c7_growth() {
    const Acceleration& acc = golden_acc();
    const Iet& G = acc.base();
    const RoofSpec spec = golden_roof(G);
    const std::vector<long long> rs{1000, 3000, 10000, 30000};
    std::vector<SigmaSet> sets;
    for (long long r : rs) sets.push_back(sigma_set(acc, *acc.level_of(mpz_class(static_cast<long>(r))), 0.995));
    std::vector<const SigmaSet*> ex;
    for (const auto& s : sets) ex.push_back(&s);
    std::size_t points = 0, in_band = 0, total = 0;
    std::vector<std::size_t> per_r(rs.size(), 0);
    double lo = INFINITY, hi = -INFINITY;
    for (std::uint64_t k = 0; points < 50; ++k) {
        const ExactScalar x = dyadic(counter_uniform(71, k) * G.total().to_double());
        bool bad = false;
        for (const auto& s : sets) bad = bad || s.set.contains(x);
        if (bad) continue;
        ++points;
        const auto reps = derivative_growth_series(spec, G, x, rs, ex);
        for (std::size_t i = 0; i < reps.size(); ++i) {
            ++total;
            const double v = reps[i].oriented_ratio;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            if (v >= 0.85 && v <= 1.15) {
                ++in_band;
                ++per_r[i];
            }
        }
    }
    return {in_band == total, fmt("%zu of %zu (point, r) pairs in [0.85, 1.15]; per r %zu/%zu/%zu/%zu; oriented ratio "
                                  "range [%.3f, %.3f]",
                                  in_band, total, per_r[0], per_r[1], per_r[2], per_r[3], lo, hi)};
}

Outcome c8_forbac() {
    const Acceleration& acc = golden_acc();
    const DcParams p = params_for(acc);
    const Iet& G = acc.base();
    const double eps = 0.2;
    const ExactScalar margin = dyadic(eps / 8.0) * G.total();
    const ExactScalar width = G.total() - margin - margin;
    std::size_t checked = 0, failures = 0, fwd_only = 0, bwd_only = 0;
    for (std::size_t l = 6; l <= 12; ++l)
        for (long k = 0; k < 1000; ++k) {
            const ExactScalar x = margin + width * ExactScalar::rational(2 * k + 1, 2000);
            const ForbacReport fb = forbac_scan(acc, x, l, p.L, eps);
            ++checked;
            if (!fb.forward && !fb.backward) ++failures;
            fwd_only += fb.forward && !fb.backward;
            bwd_only += fb.backward && !fb.forward;
        }
    return {failures == 0, fmt("%zu grid points over l = 6..12, %zu with neither direction (forward only %zu, "
                               "backward only %zu)",
                               checked, failures, fwd_only, bwd_only)};
}

Outcome c9_endpoint_separation() {
    std::size_t checked = 0, failures = 0;
    for (const Acceleration* acc : {&golden_acc(), &bounded_acc()})
        for (std::size_t l = 0; l <= 12; ++l) {
            const EndpointSeparation r = endpoint_separation(*acc, l, acc->lbar());
            ++checked;
            if (!r.holds) ++failures;
        }
    return {failures == 0, fmt("%zu levels on both fixtures, %zu violations", checked, failures)};
}

Outcome c10_witness() {
    const Acceleration& acc = golden_acc();
    const DcParams p = params_for(acc);
    const RoofSpec spec = golden_roof(acc.base());
    const WitnessConfig cfg;
    const auto levels = witness_levels(acc, p, spec, cfg);
    const GoodSet good(acc, cfg.eps, p.tau_prime_d(), p.xi_d(), levels);
    const WitnessSummary s = witness_experiment(acc, p, spec, cfg, good, true);
    bool shape_ok = true;
    for (const auto& w : s.results)
        if (w.verdict == Verdict::Verified &&
            (std::abs(w.p) != 1 || static_cast<double>(w.L) < cfg.kappa() * static_cast<double>(w.M)))
            shape_ok = false;
    return {s.rate >= 0.9 && s.reverified == s.verified && shape_ok,
            fmt("%zu of %zu verified, %zu re-verified, %zu switched direction; good-set measure %.3f",
                s.verified, s.attempted, s.reverified, s.switched, good.good_measure())};
}

Outcome c11_mixing() {
    const Iet G = golden_rotation();
    const MixingProbe probe(golden_roof(G), G);
    const BoundObservable g = probe.bind(Observable::bump(0.5, 0.2, 0.5, 0.4, true));
    const std::size_t n = 1000000;
    const Estimate e0 = probe.correlation(g, g, 0.0, n, 1);
    const Estimate e5 = probe.correlation(g, g, 5.0, n, 1);
    const Estimate e200 = probe.correlation(g, g, 200.0, n, 1);
    const bool var_ok = std::abs(e0.value - g.variance()) <= 3 * e0.stderr_;
    const bool trend_ok = std::abs(e200.value) < std::abs(e5.value);
    return {var_ok && trend_ok, fmt("var %.4e vs exact %.4e (stderr %.1e); |C(5)| = %.3e, |C(200)| = %.3e (stderr %.1e)",
                                    e0.value, g.variance(), e0.stderr_, std::abs(e5.value), std::abs(e200.value),
                                    e200.stderr_)};
}

// Independent check of the final parameter window.
bool window_ok(const ParamCandidate& c) {
    const mpq_class one(1);
    return c.tau > one && c.tau < mpq_class(16, 15) && c.tau_prime > mpq_class(15, 16) && c.tau_prime < one &&
           c.eta > mpq_class(3, 4) && c.eta < 2 * c.tau_prime - c.tau && c.xi > mpq_class(99, 100) &&
           c.xi > c.tau_prime * c.eta && c.xi < c.tau_prime;
}

Outcome c12_diophantine() {
    const Acceleration& acc = golden_acc();
    bool accepts = true;
    try {
        validate_params(kParams, acc.nu(), acc.lbar(), 2);
    } catch (const ConstraintViolation&) {
        accepts = false;
    }
    std::size_t rejected = 0;
    for (std::uint64_t k = 0; k < 20; ++k) {
        ParamCandidate c = kParams;
        const mpq_class off(static_cast<long>(counter_random(121, k) % 1000), 1000000);  // in [0, 1/1000)
        switch (k % 10) {
            case 0: c.tau = 1 - off; break;
            case 1: c.tau = mpq_class(16, 15) + off; break;
            case 2: c.tau_prime = mpq_class(15, 16) - off; break;
            case 3: c.tau_prime = 1 + off; break;
            case 4: c.eta = mpq_class(3, 4) - off; break;
            case 5: c.eta = 2 * c.tau_prime - c.tau + off; break;
            case 6: c.xi = mpq_class(99, 100) - off; break;
            case 7: c.xi = c.tau_prime + off; break;
            case 8: c.eta = mpq_class(199, 200); c.xi = c.tau_prime * c.eta - off; break;
            default: c.tau = mpq_class(16, 15); c.tau_prime = mpq_class(15, 16); break;
        }
        if (window_ok(c)) continue;  // not a violation; counted as a miss
        try {
            validate_params(c, acc.nu(), acc.lbar(), 2);
        } catch (const ConstraintViolation&) {
            ++rejected;
        }
    }
    const DcParams p = params_for(acc);
    const DcSeries s = DcSeries::from(acc);
    const RatnerDcPartial r30 = ratner_dc_partial(s, p, 30);
    const RatnerDcPartial r20 = ratner_dc_partial(s, p, 20);
    std::size_t late_bad = 0;
    for (std::size_t l : r30.bad_indices) late_bad += l > 3;
    std::size_t members = 0;
    for (std::size_t l = 1; l <= 30; ++l) members += k_set_membership(s, p, l);
    const bool stable = r30.partial_sum == r20.partial_sum;
    return {accepts && rejected == 20 && late_bad == 0 && stable,
            fmt("accepts defaults: %s; rejected %zu of 20 boundary cases; bad set to depth 30 has %zu indices, "
                "%zu beyond l = 3; partial sums %.4f (20) vs %.4f (30); K_T members in 1..30: %zu",
                accepts ? "yes" : "no", rejected, r30.bad_indices.size(), late_bad, r20.partial_sum,
                r30.partial_sum, members)};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        double budget_s;  // 0 when no runtime limit applies
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> all{
        {1, 10, c1_cocycle}, {2, 30, c2_return_times}, {3, 0, c3_partitions}, {4, 0, c4_fibonacci},
        {5, 30, c5_hilbert}, {6, 0, c6_sigma_bound},   {7, 120, c7_growth},  {8, 60, c8_forbac},
        {9, 0, c9_endpoint_separation},  {10, 300, c10_witness},   {11, 180, c11_mixing}, {12, 0, c12_diophantine},
    };
    int failed = 0;
    for (const auto& c : all) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = c.budget_s == 0 || secs < c.budget_s;
        const bool pass = o.pass && in_time;
        failed += !pass;
        const std::string timing =
            c.budget_s == 0 ? fmt("%.1f s", secs) : fmt("%.1f s of %.0f s%s", secs, c.budget_s, in_time ? "" : " (over budget)");
        std::printf("criterion %2d: %s  %s; %s\n", c.id, pass ? "PASS" : "FAIL", o.detail.c_str(), timing.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
    return failed == 0 ? 0 : 1;
}
