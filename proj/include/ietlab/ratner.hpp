#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ietlab/accel.hpp"
#include "ietlab/diophantine.hpp"
#include "ietlab/intervals.hpp"
#include "ietlab/roof.hpp"

namespace ietlab {

enum class Direction { Forward, Backward };
const char* direction_name(Direction d);

struct ForbacReport {
    std::size_t l = 0;
    ExactScalar forward_dist, backward_dist;  // min distance from {l_a, r_a} to the orbit segments
    ExactScalar threshold;                    // c / q_{l+L}, c = 1/(6 nu)
    bool forward = false, backward = false;
    long long orbit_length = 0;               // q_l
};

// x must lie outside [0, eps/8) and (|I| - eps/8, |I|).
ForbacReport forbac_scan(const Acceleration& acc, const ExactScalar& x, std::size_t l, std::size_t L, double eps);

struct EndpointSeparation {
    std::size_t l = 0;
    ExactScalar min_left;   // min |l_{a,t} - l_{b,b}| over all a and b != first bottom letter
    ExactScalar min_right;  // min |r_{a,t} - r_{b,b}| over a != last top letter and all b
    ExactScalar bound;      // |I^(n_{l+lbar})| / nu
    bool holds = false;
};

EndpointSeparation endpoint_separation(const Acceleration& acc, std::size_t l, std::size_t lbar);

// J_l^k: preimages T^{-i}, k q_l <= i < (k+1) q_l, of neighbourhoods of radius 1/((k+1) q_l log((k+1) q_l)^xi).
IntervalUnion j_set(const Acceleration& acc, std::size_t l, std::size_t k, double xi);
// J_l: union over k = 0 .. floor(q_{l+1}/q_l) + 1.
IntervalUnion j_union(const Acceleration& acc, std::size_t l, double xi);

// Margins plus the excluded unions Z1 (doubled Sigma sets) and Z2 (J sets) over a window of levels.
class GoodSet {
public:
    GoodSet(const Acceleration& acc, double eps, double tau_prime, double xi, std::vector<std::size_t> levels);

    // Name of the set excluding x, or nullopt when x is good.
    std::optional<std::string> excluded_by(const ExactScalar& x) const;
    bool contains(const ExactScalar& x) const { return !excluded_by(x).has_value(); }

    const std::vector<std::size_t>& levels() const { return levels_; }
    double z1_measure() const { return z1_measure_; }
    double z2_measure() const { return z2_measure_; }
    double good_measure() const { return good_measure_; }
    const ExactScalar& margin() const { return margin_; }
    const ExactScalar& total() const { return total_; }

private:
    std::vector<std::size_t> levels_;
    ExactScalar margin_, total_;
    IntervalUnion z1_, z2_;
    double z1_measure_ = 0.0, z2_measure_ = 0.0, good_measure_ = 0.0;
};

struct WitnessConfig {
    double eps = 0.2;
    long long N = 10;
    double delta = 0.04;       // pair-distance bound used at desk scale
    std::uint64_t seed = 1;
    std::size_t pairs = 100;
    double gap = 1e-5;         // nominal y - x
    double gap_jitter = 0.1;   // relative spread of sampled gaps
    mpfr_prec_t reverify_prec = 256;

    double kappa() const { return eps * eps * eps * eps * eps; }
};

// min(1/l_a^2, eps^2) with l_a = max((N^2+1)/eps^4, 1/eps, l_emp).
double delta_formula(double eps, long long N, double l_emp);

enum class Verdict { Verified, Failed };

struct WitnessResult {
    ExactScalar x, y;
    long long r = 0;
    std::size_t l = 0;
    int case_index = 2;            // 1 when l is in K_T, 2 otherwise
    Direction direction = Direction::Forward;
    bool switched = false;         // primary direction failed and the other one was used
    long long M = 0, L = 0;
    int p = 0;
    double max_deviation = 0.0;
    long long worst_n = 0;
    double max_separation = 0.0;
    Verdict verdict = Verdict::Failed;
    std::string reason;
    long long failure_index = 0;
    bool reverified = false;
    double reverify_deviation = 0.0;
};

// Orbit r from 1/(g (r+1) log(r+1)) < y - x <= 1/(g r log r), g = |C- - C+|.
long long pair_scale(double gap_const, double dist);

WitnessResult sr_pair_test(const Acceleration& acc, const DcParams& params, const RoofSpec& spec,
                           const WitnessConfig& cfg, const GoodSet& good, const ExactScalar& x, const ExactScalar& y);

// Re-derives both clauses with MPFR sums at `prec` along an independent orbit pass.
bool reverify_witness(const RoofSpec& spec, const Iet& T, const WitnessResult& w, double eps, mpfr_prec_t prec,
                      double* deviation = nullptr);

struct WitnessSummary {
    std::size_t attempted = 0, verified = 0, reverified = 0, switched = 0;
    std::size_t direction_conflicts = 0;  // forward hypothesis true but backward verified
    double rate = 0.0;
    std::vector<WitnessResult> results;
};

// Levels whose Sigma and J sets enter the good set for pairs of the configured gap:
// one level either side of the orbit scales reached, excluding members of K_T.
std::vector<std::size_t> witness_levels(const Acceleration& acc, const DcParams& params, const RoofSpec& spec,
                                        const WitnessConfig& cfg);

// Samples pairs from the good set with counter-based randomness.
std::vector<std::pair<ExactScalar, ExactScalar>> sample_pairs(const GoodSet& good, const WitnessConfig& cfg);
WitnessSummary witness_experiment(const Acceleration& acc, const DcParams& params, const RoofSpec& spec,
                                  const WitnessConfig& cfg, const GoodSet& good, bool parallel = true);

// Rational approximation with denominator 2^bits.
ExactScalar dyadic(double v, int bits = 48);

}  // namespace ietlab
