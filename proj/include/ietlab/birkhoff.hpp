#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "ietlab/accel.hpp"
#include "ietlab/intervals.hpp"
#include "ietlab/roof.hpp"

namespace ietlab {

// Largest inverse one-sided distances along {T^i x}: U from points just right of some r_a,
// V from points just left of some l_a. Orbit indices are 0..r-1 (r > 0) or r..-1 (r < 0).
struct ApproachStats {
    std::optional<ExactScalar> u_dist, v_dist;  // closest one-sided approaches
    long long u_index = 0, v_index = 0;
    double U = 0.0, V = 0.0;
};

ApproachStats approach_stats(const Iet& T, const ExactScalar& x, long long r);

// (log ||A|| / log q)^{tau'}
double sigma_value(const mpz_class& normA, const mpz_class& q, double tau_prime);
// Rational upper bound for sigma with 1e-12 slack.
mpq_class sigma_round_up(double sigma);
double sigma(const Acceleration& acc, std::size_t l, double tau_prime);

struct SigmaSet {
    std::size_t l = 0;
    double sigma = 0.0;
    mpq_class sigma_up;
    ExactScalar radius;         // half-width of each neighbourhood
    long long preimages = 0;    // largest i in T^{-i}
    IntervalUnion set;
    ExactScalar measure;
    mpq_class bound;            // 2 |A| nu^2 sigma^2 ||A_l||
    bool bound_holds = false;
};

// Union over letters of T^{-i}[l_a - s sigma |I^(n_l)|, l_a + s sigma |I^(n_l)|], i = 0..ceil(sigma q_{l+1}).
// s = `scale` (1 for the bad set itself, 2 for its enlargement).
SigmaSet sigma_set(const Acceleration& acc, std::size_t l, double tau_prime, long scale = 1);
// Same construction from an explicit (possibly degenerate) rational sigma.
SigmaSet sigma_set_from(const Acceleration& acc, std::size_t l, const mpq_class& sigma_up, long scale = 1);

struct GrowthConfig {
    double tolerance = 0.15;
    std::optional<double> M;  // default 4 max(C+, C-, 1)
};

struct GrowthReport {
    long long r = 0;
    double S = 0.0, S_radius = 0.0;
    double rlogr = 0.0;
    double ratio = 0.0;           // S / (r log r)
    double oriented_ratio = 0.0;  // ratio / sign(C- - C+)
    double U = 0.0, V = 0.0, M = 0.0;
    bool lower_ok = false, upper_ok = false, within_mpd_bounds = false, used_UV_slack = false;
    bool in_band = false;         // |oriented ratio - |gap|| <= tolerance
};

// Precondition: x outside `excluded` (the bad set at the level of r).
GrowthReport derivative_growth_check(const RoofSpec& spec, const Iet& T, const ExactScalar& x, long long r,
                                     const SigmaSet& excluded, const GrowthConfig& cfg = {});
// One orbit pass for several r (increasing), each checked against its own bad set.
std::vector<GrowthReport> derivative_growth_series(const RoofSpec& spec, const Iet& T, const ExactScalar& x,
                                                   const std::vector<long long>& rs,
                                                   const std::vector<const SigmaSet*>& excluded,
                                                   const GrowthConfig& cfg = {});

struct PrtyReport {
    double threshold = 0.0;  // 2 q_l (log q_l)^xi
    bool forward_hypothesis = false, backward_hypothesis = false;
    bool forward_ok = false, backward_ok = false;  // conclusions on the r-grid (vacuous when hypothesis fails)
    double forward_max_dev = 0.0, backward_max_dev = 0.0;
    double forward_U = 0.0, forward_V = 0.0, backward_U = 0.0, backward_V = 0.0;
    std::vector<long long> grid;
};

PrtyReport prty_conditions(const Acceleration& acc, const RoofSpec& spec, const ExactScalar& x, std::size_t l,
                           double xi, double tolerance = 0.15, std::size_t grid_points = 8);

// Trend series sigma (log q)^xi, sigma^{2-eta} l^tau, log||A|| / ((log q)^xi sigma^eta).
struct RatioTrends {
    std::vector<double> nr1, nr2, nr3;
};
RatioTrends ratio_trends(const Acceleration& acc, std::size_t l_max, double tau, double tau_prime, double xi,
                         double eta);

}  // namespace ietlab
