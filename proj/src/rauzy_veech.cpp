#include "ietlab/rauzy_veech.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ietlab/errors.hpp"

namespace ietlab {

Permutation rauzy_move(const Permutation& p, StepType type, int* winner, int* loser) {
    std::vector<int> top = p.top();
    std::vector<int> bottom = p.bottom();
    const int at = top.back();
    const int ab = bottom.back();
    int w, l;
    if (type == StepType::Top) {
        w = at;
        l = ab;
        bottom.pop_back();
        bottom.insert(std::find(bottom.begin(), bottom.end(), w) + 1, l);
    } else {
        w = ab;
        l = at;
        top.pop_back();
        top.insert(std::find(top.begin(), top.end(), w) + 1, l);
    }
    if (winner) *winner = w;
    if (loser) *loser = l;
    return Permutation(p.alphabet(), std::move(top), std::move(bottom));
}

RvStep rv_step(const Iet& T, std::size_t index) {
    const Permutation& p = T.perm();
    auto c = T.length(p.top().back()) <=> T.length(p.bottom().back());
    if (c == 0) throw RVUndefined(index, "last top and bottom intervals have equal length at step " + std::to_string(index));
    const StepType type = c > 0 ? StepType::Top : StepType::Bottom;
    int winner = 0, loser = 0;
    Permutation next = rauzy_move(p, type, &winner, &loser);
    std::vector<ExactScalar> lam = T.lengths();
    lam[static_cast<std::size_t>(winner)] -= lam[static_cast<std::size_t>(loser)];
    return RvStep{Iet(std::move(next), std::move(lam)), IntMatrix::elementary(p.size(), winner, loser), type, winner,
                  loser};
}

bool is_legal_step(const Permutation& before, const IntMatrix& B) {
    const std::size_t d = before.size();
    int at = before.top().back();
    int ab = before.bottom().back();
    return B == IntMatrix::elementary(d, at, ab) || B == IntMatrix::elementary(d, ab, at);
}

InductionTrace::InductionTrace(Iet base) {
    const std::size_t d = base.size();
    iets_.push_back(std::move(base));
    prefix_.push_back(IntMatrix::identity(d));
}

IntMatrix InductionTrace::product(std::size_t m, std::size_t n) const {
    if (m > n || n > depth()) throw DomainError("invalid product window");
    IntMatrix p = IntMatrix::identity(base().size());
    for (std::size_t k = m; k < n; ++k) p = p * steps_[k];
    return p;
}

mpz_class InductionTrace::max_height(std::size_t n) const {
    auto h = heights(n);
    return *std::max_element(h.begin(), h.end());
}

mpz_class InductionTrace::min_height(std::size_t n) const {
    auto h = heights(n);
    return *std::min_element(h.begin(), h.end());
}

void InductionTrace::extend(std::size_t n) {
    while (depth() < n) {
        RvStep s = rv_step(iets_.back(), depth());
        prefix_.push_back(prefix_.back() * s.B);
        steps_.push_back(std::move(s.B));
        types_.push_back(s.type);
        iets_.push_back(std::move(s.iet));
    }
}

std::size_t InductionTrace::extend_until(std::size_t n) {
    try {
        extend(n);
    } catch (const RVUndefined&) {
    }
    return depth();
}

std::string InductionTrace::word() const {
    std::string w;
    for (auto t : types_) w += step_char(t);
    return w;
}

std::uint64_t InductionTrace::fingerprint() const {
    // FNV-1a over the permutation and the step word.
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&](const std::string& s) {
        for (unsigned char ch : s) {
            h ^= ch;
            h *= 1099511628211ULL;
        }
    };
    mix(base().perm().str());
    mix("|");
    mix(word());
    return h;
}

InductionTrace induct(InductionTrace trace, std::size_t n) {
    trace.extend(n);
    return trace;
}

bool floors_partition(std::vector<Floor> floors, const ExactScalar& total) {
    std::sort(floors.begin(), floors.end(), [](const Floor& a, const Floor& b) { return a.left < b.left; });
    ExactScalar cur;
    for (const auto& f : floors) {
        if (f.left != cur) return false;
        if (f.right <= f.left) return false;
        cur = f.right;
    }
    return cur == total;
}

TowerSystem towers(const InductionTrace& trace, std::size_t n) {
    const Iet& T = trace.base();
    const Iet& Tn = trace.at(n);
    const std::size_t d = T.size();
    TowerSystem ts;
    ts.n = n;
    ts.heights = trace.heights(n);
    ts.floors_map_up = true;
    for (std::size_t a = 0; a < d; ++a) {
        int ai = static_cast<int>(a);
        ExactScalar left = Tn.left(ai);
        const ExactScalar& w = Tn.length(ai);
        ts.base_left.push_back(left);
        ts.base_right.push_back(left + w);
        unsigned long h = ts.heights[a].get_ui();
        for (unsigned long i = 0; i < h; ++i) {
            ExactScalar right = left + w;
            ts.floors.push_back(Floor{ai, i, left, right});
            if (i + 1 < h) {
                int seg = T.locate(left);
                if (right > T.right(seg)) ts.floors_map_up = false;
                left = T.evaluate(left);
            }
        }
    }
    ts.partition_ok = floors_partition(ts.floors, T.total());
    return ts;
}

std::size_t return_time_oracle(const InductionTrace& trace, std::size_t n, int alpha) {
    const Iet& Tn = trace.at(n);
    ExactScalar mid = Tn.left(alpha) + Tn.length(alpha) / ExactScalar(2);
    auto k = first_return_time(trace.base(), mid, ExactScalar(0), Tn.total(), std::numeric_limits<std::size_t>::max());
    return *k;
}

bool balance_check(const InductionTrace& trace, std::size_t n, const mpq_class& nu) {
    const Iet& Tn = trace.at(n);
    const std::size_t d = Tn.size();
    ExactScalar nuS(nu);
    auto h = trace.heights(n);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) {
            if (a == b) continue;
            if (Tn.length(static_cast<int>(a)) > nuS * Tn.length(static_cast<int>(b))) return false;
            if (mpq_class(h[a]) > nu * h[b]) return false;
        }
    return true;
}

bool positivity_check(const InductionTrace& trace, std::size_t m, std::size_t n) {
    if (m >= n) return false;
    return trace.product(m, n).positive();
}

AccelTimes select_accel_times(const InductionTrace& trace, const mpq_class& nu, std::size_t lbar_max) {
    AccelTimes out;
    out.nu = nu;
    for (std::size_t n = 0; n <= trace.depth(); ++n)
        if (balance_check(trace, n, nu)) out.times.push_back(n);
    if (out.times.empty()) {
        out.diagnostic = "no balanced time within depth " + std::to_string(trace.depth());
        return out;
    }
    const std::size_t k = out.times.size();
    for (std::size_t lbar = 1; lbar <= lbar_max; ++lbar) {
        if (lbar >= k) break;
        bool ok = true;
        for (std::size_t l = 0; l + lbar < k && ok; ++l) ok = positivity_check(trace, out.times[l], out.times[l + lbar]);
        if (ok) {
            out.lbar = lbar;
            return out;
        }
    }
    out.diagnostic = "no positive window length up to " + std::to_string(lbar_max);
    return out;
}

std::vector<std::size_t> zorich_times(const InductionTrace& trace) {
    std::vector<std::size_t> out{0};
    for (std::size_t k = 1; k < trace.depth(); ++k)
        if (trace.type(k) != trace.type(k - 1)) out.push_back(k);
    return out;
}

double hilbert_distance(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.empty()) throw DomainError("dimension mismatch");
    double hi = 0.0, lo = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("Hilbert distance needs positive coordinates");
        double r = x[i] / y[i];
        hi = std::max(hi, r);
        lo = std::min(lo, r);
    }
    return std::log(hi / lo);
}

mpq_class hilbert_ratio(const std::vector<mpq_class>& x, const std::vector<mpq_class>& y) {
    if (x.size() != y.size() || x.empty()) throw DomainError("dimension mismatch");
    mpq_class hi, lo;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (sgn(x[i]) <= 0 || sgn(y[i]) <= 0) throw DomainError("Hilbert distance needs positive coordinates");
        mpq_class r = x[i] / y[i];
        if (i == 0 || r > hi) hi = r;
        if (i == 0 || r < lo) lo = r;
    }
    return hi / lo;
}

double projective_diameter(const IntMatrix& A) {
    if (A.has_zero_column()) throw DomainError("matrix has a zero column");
    if (!A.positive()) return std::numeric_limits<double>::infinity();
    const std::size_t d = A.size();
    double best = 0.0;
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t k = j + 1; k < d; ++k) {
            std::vector<mpq_class> cj(d), ck(d);
            for (std::size_t i = 0; i < d; ++i) {
                cj[i] = A(i, j);
                ck[i] = A(i, k);
            }
            best = std::max(best, std::log(hilbert_ratio(cj, ck).get_d()));
        }
    return best;
}

mpq_class nu_col(const IntMatrix& C) {
    if (!C.positive()) throw DomainError("nu_col needs a strictly positive matrix");
    const std::size_t d = C.size();
    mpq_class best = 1;
    for (std::size_t i = 0; i < d; ++i) {
        mpz_class hi = C(i, 0), lo = C(i, 0);
        for (std::size_t j = 1; j < d; ++j) {
            if (C(i, j) > hi) hi = C(i, j);
            if (C(i, j) < lo) lo = C(i, j);
        }
        mpq_class r(hi, lo);
        r.canonicalize();
        if (r > best) best = r;
    }
    return best;
}

double jacobian(const IntMatrix& D, const std::vector<double>& lambda) {
    if (D.has_zero_column()) throw DomainError("degenerate matrix: zero column");
    if (lambda.size() != D.size()) throw DomainError("dimension mismatch");
    for (double v : lambda)
        if (!(v > 0.0)) throw DomainError("simplex point must be strictly positive");
    auto img = D.apply(lambda);
    double norm = 0.0;
    for (double v : img) norm += v;
    return std::pow(norm, -static_cast<double>(D.size()));
}

}  // namespace ietlab
