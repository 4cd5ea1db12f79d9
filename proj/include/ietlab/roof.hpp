#pragma once

#include <vector>

#include <mpfr.h>

#include "ietlab/iet.hpp"
#include "ietlab/real.hpp"

namespace ietlab {

// On I_a: f(x) = c0 - cplus[a] log(x - l_a) - cminus[a] log(r_a - x).
struct RoofSpec {
    double c0 = 1.0;
    std::vector<double> cplus;
    std::vector<double> cminus;
    double cutoff = 1e-30;

    static RoofSpec constant(std::size_t d, double c0);
    double total_plus() const;
    double total_minus() const;
    double gap() const { return total_minus() - total_plus(); }
    bool asymmetric() const { return total_plus() != total_minus(); }
    bool singular() const;
    void validate(const Iet& T) const;
};

struct Evaluation {
    double value = 0.0;
    double radius = 0.0;
};

Evaluation eval_roof(const RoofSpec& spec, const Iet& T, const ExactScalar& x, mpfr_prec_t prec = default_precision());
Evaluation eval_roof_derivative(const RoofSpec& spec, const Iet& T, const ExactScalar& x,
                                mpfr_prec_t prec = default_precision());
Evaluation eval_roof_second_derivative(const RoofSpec& spec, const Iet& T, const ExactScalar& x,
                                       mpfr_prec_t prec = default_precision());

// High-precision accumulation used by Birkhoff sums; adds f (order 0) or f' (order 1) at x.
void accumulate_roof(const RoofSpec& spec, const Iet& T, const ExactScalar& x, int order, Real& sum, double& radius,
                     long long index = 0);

// Three-branch Birkhoff sum S_r of f (order 0) or f' (order 1).
Evaluation birkhoff_sum(const RoofSpec& spec, const Iet& T, const ExactScalar& x, long long r, int order = 0,
                        mpfr_prec_t prec = default_precision());

// S_r for each r in the increasing list `rs` (all of one sign), in one pass.
std::vector<Evaluation> birkhoff_checkpoints(const RoofSpec& spec, const Iet& T, const ExactScalar& x,
                                             const std::vector<long long>& rs, int order = 0,
                                             mpfr_prec_t prec = default_precision());

struct FlowPoint {
    ExactScalar x;
    double y = 0.0;
};

// r(x, s) = max{ r in Z : S_r(x) <= s }.
long long discrete_iterations(const RoofSpec& spec, const Iet& T, const ExactScalar& x, double t,
                              mpfr_prec_t prec = default_precision());
FlowPoint flow(const RoofSpec& spec, const Iet& T, const FlowPoint& p, double t, mpfr_prec_t prec = default_precision());

// Closed-form integral of f over the whole interval.
double roof_integral(const RoofSpec& spec, const Iet& T);
// Closed-form integral of f over [l_a, r_a).
double roof_integral_on(const RoofSpec& spec, const Iet& T, int a);

// Double-precision roof for Monte-Carlo kernels, indexed by top position.
struct RoofView {
    IetView iet;
    std::vector<double> left, right, cplus, cminus;
    double c0;

    RoofView(const RoofSpec& spec, const Iet& T);
    double value(double x) const;
    double value_at(double x, int pos) const;
};

}  // namespace ietlab
