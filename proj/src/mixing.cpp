#include "ietlab/mixing.hpp"

#include <algorithm>
#include <cmath>

#include "ietlab/errors.hpp"
#include "ietlab/rng.hpp"

namespace ietlab {

namespace {

constexpr double kBumpIntegral = 16.0 / 15.0;
constexpr double kBumpSquareIntegral = 256.0 / 315.0;

double bump1(double u) {
    if (u <= -1.0 || u >= 1.0) return 0.0;
    const double v = 1.0 - u * u;
    return v * v;
}

}  // namespace

Observable Observable::bump(double cx, double wx, double cy, double wy, bool centered) {
    if (!(wx > 0) || !(wy > 0)) throw DomainError("bump widths must be positive");
    Observable o;
    o.kind = Kind::Bump;
    o.cx = cx;
    o.wx = wx;
    o.cy = cy;
    o.wy = wy;
    o.centered = centered;
    return o;
}

Observable Observable::constant(double c) {
    Observable o;
    o.kind = Kind::Constant;
    o.c = c;
    return o;
}

double Observable::raw(double x, double y) const {
    if (kind == Kind::Constant) return c;
    return bump1((x - cx) / wx) * bump1((y - cy) / wy);
}

double Observable::raw_integral(double area) const {
    if (kind == Kind::Constant) return c * area;
    return wx * wy * kBumpIntegral * kBumpIntegral;
}

double Observable::raw_square_integral(double area) const {
    if (kind == Kind::Constant) return c * c * area;
    return wx * wy * kBumpSquareIntegral * kBumpSquareIntegral;
}

MixingProbe::MixingProbe(const RoofSpec& spec, const Iet& T) : roof_(spec, T), inv_(T.inverse()) {
    area_ = roof_integral(spec, T);
    const double total = T.total().to_double();
    double acc = spec.c0 * total;
    weights_.push_back(acc);
    comp_pos_.push_back(-1);
    comp_side_.push_back(0);
    comp_len_.push_back(total);
    for (std::size_t p = 0; p < roof_.left.size(); ++p) {
        const double lam = roof_.right[p] - roof_.left[p];
        if ((roof_.cplus[p] > 0 || roof_.cminus[p] > 0) && lam > 1.0)
            throw DomainError("log-component sampling needs interval lengths at most 1");
        const double mass = lam * (1.0 - std::log(lam));
        for (int side : {1, -1}) {
            const double cst = side > 0 ? roof_.cplus[p] : roof_.cminus[p];
            if (cst <= 0) continue;
            acc += cst * mass;
            weights_.push_back(acc);
            comp_pos_.push_back(static_cast<int>(p));
            comp_side_.push_back(side);
            comp_len_.push_back(lam);
        }
    }
}

BoundObservable MixingProbe::bind(const Observable& o) const {
    BoundObservable b;
    b.obs = o;
    const double m = o.raw_integral(area_) / area_;
    const double s = o.raw_square_integral(area_) / area_;
    if (o.centered) {
        b.offset = m;
        b.mean = 0.0;
        b.second_moment = s - m * m;
    } else {
        b.mean = m;
        b.second_moment = s;
    }
    return b;
}

bool MixingProbe::support_under_graph(const Observable& o, std::size_t grid) const {
    if (o.kind == Observable::Kind::Constant) return true;
    if (o.cy - o.wy < 0) return false;
    const double lo = std::max(o.cx - o.wx, 0.0), hi = std::min(o.cx + o.wx, roof_.iet.total);
    if (o.cx - o.wx < 0 || o.cx + o.wx > roof_.iet.total) return false;
    for (std::size_t i = 0; i <= grid; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid);
        const double xx = std::min(x, std::nextafter(roof_.iet.total, 0.0));
        if (roof_.value(xx) < o.cy + o.wy) return false;
    }
    return true;
}

std::pair<double, double> MixingProbe::sample(std::uint64_t seed, std::uint64_t i) const {
    const std::uint64_t base = i * 8;
    const double u0 = counter_uniform(seed, base) * weights_.back();
    const auto k = static_cast<std::size_t>(std::upper_bound(weights_.begin(), weights_.end(), u0) - weights_.begin());
    const std::size_t c = std::min(k, weights_.size() - 1);
    double x;
    if (comp_side_[c] == 0) {
        x = counter_uniform(seed, base + 1) * comp_len_[c];
    } else {
        // density of v on (0,1) proportional to -log(lam v) = -log lam - log v
        const double lam = comp_len_[c];
        const double a = -std::log(lam);
        double v;
        if (counter_uniform(seed, base + 2) * (1.0 + a) < a) v = counter_uniform_open(seed, base + 3);
        else v = counter_uniform_open(seed, base + 3) * counter_uniform_open(seed, base + 4);
        const auto p = static_cast<std::size_t>(comp_pos_[c]);
        x = comp_side_[c] > 0 ? roof_.left[p] + lam * v : roof_.right[p] - lam * v;
    }
    x = std::clamp(x, 0.0, std::nextafter(roof_.iet.total, 0.0));
    const double y = counter_uniform(seed, base + 5) * roof_.value(x);
    return {x, y};
}

std::pair<double, double> MixingProbe::flow(double x, double y, double t) const {
    double s = y + t;
    const double top = std::nextafter(roof_.iet.total, 0.0);
    if (s >= 0) {
        for (double f = roof_.value(x); s >= f; f = roof_.value(x)) {
            s -= f;
            x = std::min(roof_.iet.apply(x), top);
        }
    } else {
        while (s < 0) {
            x = std::min(inv_.apply(x), top);
            s += roof_.value(x);
        }
    }
    return {x, s};
}

template <class F>
Estimate MixingProbe::run(std::size_t n, bool parallel, F&& per_sample) const {
    const std::size_t chunks = (n + kChunk - 1) / kChunk;
    std::vector<double> sum(chunks, 0.0), sq(chunks, 0.0);
    const long long nc = static_cast<long long>(chunks);
#pragma omp parallel for schedule(static) if (parallel)
    for (long long c = 0; c < nc; ++c) {
        const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
        const std::size_t hi = std::min(n, lo + kChunk);
        double s = 0.0, q = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            const double v = per_sample(static_cast<std::uint64_t>(i));
            s += v;
            q += v * v;
        }
        sum[static_cast<std::size_t>(c)] = s;
        sq[static_cast<std::size_t>(c)] = q;
    }
    double s = 0.0, q = 0.0;
    for (std::size_t c = 0; c < chunks; ++c) {
        s += sum[c];
        q += sq[c];
    }
    Estimate e;
    e.samples = n;
    if (n == 0) return e;
    const double nn = static_cast<double>(n);
    const double mean = s / nn;
    const double var = n > 1 ? std::max(0.0, (q - nn * mean * mean) / (nn - 1.0)) : 0.0;
    e.value = mean;
    e.stderr_ = std::sqrt(var / nn);
    return e;
}

Estimate MixingProbe::correlation(const BoundObservable& g, const BoundObservable& h, double t, std::size_t n,
                                  std::uint64_t seed, bool parallel) const {
    Estimate e = run(n, parallel, [&](std::uint64_t i) {
        auto [x, y] = sample(seed, i);
        auto [fx, fy] = flow(x, y, t);
        return g(fx, fy) * h(x, y);
    });
    e.value -= g.mean * h.mean;
    return e;
}

Estimate MixingProbe::triple(const BoundObservable& g1, const BoundObservable& g2, const BoundObservable& g3,
                             double t2, double t3, std::size_t n, std::uint64_t seed, bool parallel) const {
    Estimate e = run(n, parallel, [&](std::uint64_t i) {
        auto [x, y] = sample(seed, i);
        auto [x2, y2] = flow(x, y, t2);
        auto [x3, y3] = flow(x2, y2, t3);
        return g1(x, y) * g2(x2, y2) * g3(x3, y3);
    });
    e.value -= g1.mean * g2.mean * g3.mean;
    return e;
}

}  // namespace ietlab
