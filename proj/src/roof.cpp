#include "ietlab/roof.hpp"

#include <cmath>
#include <numeric>

#include "ietlab/errors.hpp"

namespace ietlab {

RoofSpec RoofSpec::constant(std::size_t d, double c0) {
    RoofSpec s;
    s.c0 = c0;
    s.cplus.assign(d, 0.0);
    s.cminus.assign(d, 0.0);
    return s;
}

double RoofSpec::total_plus() const { return std::accumulate(cplus.begin(), cplus.end(), 0.0); }
double RoofSpec::total_minus() const { return std::accumulate(cminus.begin(), cminus.end(), 0.0); }

bool RoofSpec::singular() const {
    for (double c : cplus)
        if (c > 0) return true;
    for (double c : cminus)
        if (c > 0) return true;
    return false;
}

void RoofSpec::validate(const Iet& T) const {
    if (cplus.size() != T.size() || cminus.size() != T.size()) throw DomainError("roof constants do not match alphabet");
    if (!(c0 > 0)) throw DomainError("roof offset must be positive");
    for (double c : cplus)
        if (c < 0) throw DomainError("negative singularity constant");
    for (double c : cminus)
        if (c < 0) throw DomainError("negative singularity constant");
}

namespace {

// Relative error of a distance converted from an exact scalar.
double dist_rel_err(mpfr_prec_t prec) { return std::ldexp(1.0, -static_cast<int>(prec) + 5); }

struct Distances {
    Real left, right;  // x - l_a, r_a - x
    double left_d, right_d;
};

Distances distances(const RoofSpec& spec, const Iet& T, const ExactScalar& x, int a, mpfr_prec_t prec,
                    long long index) {
    ExactScalar dl = x - T.left(a);
    ExactScalar dr = T.right(a) - x;
    const auto ai = static_cast<std::size_t>(a);
    if ((spec.cplus[ai] > 0 && dl.is_zero()) || (spec.cminus[ai] > 0 && dr.is_zero()))
        throw DomainError("roof evaluated exactly at a singularity");
    Distances out{Real(dl, prec), Real(dr, prec), 0.0, 0.0};
    out.left_d = out.left.to_double();
    out.right_d = out.right.to_double();
    if ((spec.cplus[ai] > 0 && out.left_d < spec.cutoff) || (spec.cminus[ai] > 0 && out.right_d < spec.cutoff))
        throw SingularityTooClose(index, "orbit point within cutoff of a singularity at index " + std::to_string(index));
    return out;
}

}  // namespace

void accumulate_roof(const RoofSpec& spec, const Iet& T, const ExactScalar& x, int order, Real& sum, double& radius,
                     long long index) {
    const mpfr_prec_t prec = sum.precision();
    int a = T.locate(x);
    const auto ai = static_cast<std::size_t>(a);
    const double cp = spec.cplus[ai];
    const double cm = spec.cminus[ai];
    const double eps = dist_rel_err(prec);
    if (order == 0) {
        Real c0(spec.c0, prec);
        sum += c0;
        if (cp == 0 && cm == 0) return;
        Distances d = distances(spec, T, x, a, prec, index);
        if (cp > 0) {
            Real t = log(d.left);
            t *= Real(cp, prec);
            sum -= t;
            radius += cp * (eps + std::abs(std::log(d.left_d)) * eps);
        }
        if (cm > 0) {
            Real t = log(d.right);
            t *= Real(cm, prec);
            sum -= t;
            radius += cm * (eps + std::abs(std::log(d.right_d)) * eps);
        }
        return;
    }
    if (cp == 0 && cm == 0) return;
    Distances d = distances(spec, T, x, a, prec, index);
    if (order == 1) {
        if (cp > 0) {
            Real t(cp, prec);
            t /= d.left;
            sum -= t;
            radius += cp / d.left_d * eps;
        }
        if (cm > 0) {
            Real t(cm, prec);
            t /= d.right;
            sum += t;
            radius += cm / d.right_d * eps;
        }
        return;
    }
    if (cp > 0) {
        Real t(cp, prec);
        t /= d.left * d.left;
        sum += t;
        radius += cp / (d.left_d * d.left_d) * 2 * eps;
    }
    if (cm > 0) {
        Real t(cm, prec);
        t /= d.right * d.right;
        sum += t;
        radius += cm / (d.right_d * d.right_d) * 2 * eps;
    }
}

namespace {

Evaluation single(const RoofSpec& spec, const Iet& T, const ExactScalar& x, int order, mpfr_prec_t prec) {
    spec.validate(T);
    Real s(prec);
    double rad = 0.0;
    accumulate_roof(spec, T, x, order, s, rad);
    double v = s.to_double();
    return Evaluation{v, rad + std::abs(v) * std::ldexp(1.0, -static_cast<int>(prec) + 2)};
}

}  // namespace

Evaluation eval_roof(const RoofSpec& spec, const Iet& T, const ExactScalar& x, mpfr_prec_t prec) {
    return single(spec, T, x, 0, prec);
}

Evaluation eval_roof_derivative(const RoofSpec& spec, const Iet& T, const ExactScalar& x, mpfr_prec_t prec) {
    return single(spec, T, x, 1, prec);
}

Evaluation eval_roof_second_derivative(const RoofSpec& spec, const Iet& T, const ExactScalar& x, mpfr_prec_t prec) {
    return single(spec, T, x, 2, prec);
}

std::vector<Evaluation> birkhoff_checkpoints(const RoofSpec& spec, const Iet& T, const ExactScalar& x,
                                             const std::vector<long long>& rs, int order, mpfr_prec_t prec) {
    spec.validate(T);
    std::vector<Evaluation> out;
    if (rs.empty()) return out;
    const bool backward = rs.back() < 0 || rs.front() < 0;
    Iet Tinv = T.inverse();
    Real sum(prec);
    double rad = 0.0;
    ExactScalar y = x;
    long long done = 0;  // number of terms accumulated
    for (long long r : rs) {
        if ((r < 0) != backward && r != 0) throw DomainError("checkpoints must share one sign");
        long long target = r < 0 ? -r : r;
        if (target < done) throw DomainError("checkpoints must be monotone in |r|");
        while (done < target) {
            if (backward) {
                y = Tinv.evaluate(y);
                accumulate_roof(spec, T, y, order, sum, rad, -(done + 1));
            } else {
                accumulate_roof(spec, T, y, order, sum, rad, done);
                y = T.evaluate(y);
            }
            ++done;
        }
        double v = sum.to_double();
        double tot = rad + std::abs(v) * std::ldexp(1.0, -static_cast<int>(prec) + 2) +
                     static_cast<double>(done) * std::ldexp(std::abs(v) + 1.0, -static_cast<int>(prec) + 1);
        out.push_back(Evaluation{backward ? -v : v, tot});
    }
    return out;
}

Evaluation birkhoff_sum(const RoofSpec& spec, const Iet& T, const ExactScalar& x, long long r, int order,
                        mpfr_prec_t prec) {
    if (r == 0) return Evaluation{0.0, 0.0};
    return birkhoff_checkpoints(spec, T, x, {r}, order, prec).front();
}

namespace {

struct FlowState {
    ExactScalar x;
    long long r;
    Real rest;
};

FlowState flow_down(const RoofSpec& spec, const Iet& T, const ExactScalar& x0, const Real& s0, mpfr_prec_t prec) {
    spec.validate(T);
    Real s = s0;
    ExactScalar x = x0;
    long long r = 0;
    if (s.sign() >= 0) {
        for (;;) {
            Real f(prec);
            double rad = 0.0;
            accumulate_roof(spec, T, x, 0, f, rad, r);
            if (s < f) break;
            s -= f;
            x = T.evaluate(x);
            ++r;
        }
    } else {
        Iet Tinv = T.inverse();
        while (s.sign() < 0) {
            x = Tinv.evaluate(x);
            --r;
            Real f(prec);
            double rad = 0.0;
            accumulate_roof(spec, T, x, 0, f, rad, r);
            s += f;
        }
    }
    return FlowState{x, r, s};
}

}  // namespace

long long discrete_iterations(const RoofSpec& spec, const Iet& T, const ExactScalar& x, double t, mpfr_prec_t prec) {
    return flow_down(spec, T, x, Real(t, prec), prec).r;
}

FlowPoint flow(const RoofSpec& spec, const Iet& T, const FlowPoint& p, double t, mpfr_prec_t prec) {
    Real s(p.y, prec);
    s += Real(t, prec);
    FlowState st = flow_down(spec, T, p.x, s, prec);
    return FlowPoint{st.x, st.rest.to_double()};
}

double roof_integral_on(const RoofSpec& spec, const Iet& T, int a) {
    const auto ai = static_cast<std::size_t>(a);
    double lam = T.length(a).to_double();
    double sing = lam * (1.0 - std::log(lam));
    return spec.c0 * lam + (spec.cplus[ai] + spec.cminus[ai]) * sing;
}

double roof_integral(const RoofSpec& spec, const Iet& T) {
    spec.validate(T);
    double s = 0.0;
    for (std::size_t a = 0; a < T.size(); ++a) s += roof_integral_on(spec, T, static_cast<int>(a));
    return s;
}

RoofView::RoofView(const RoofSpec& spec, const Iet& T) : iet(T), c0(spec.c0) {
    spec.validate(T);
    for (int a : T.perm().top()) {
        left.push_back(T.left(a).to_double());
        right.push_back(T.right(a).to_double());
        cplus.push_back(spec.cplus[static_cast<std::size_t>(a)]);
        cminus.push_back(spec.cminus[static_cast<std::size_t>(a)]);
    }
}

double RoofView::value_at(double x, int pos) const {
    const auto p = static_cast<std::size_t>(pos);
    double v = c0;
    if (cplus[p] > 0) v -= cplus[p] * std::log(x - left[p]);
    if (cminus[p] > 0) v -= cminus[p] * std::log(right[p] - x);
    return v;
}

double RoofView::value(double x) const { return value_at(x, iet.locate_pos(x)); }

}  // namespace ietlab
