#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "ietlab/accel.hpp"
#include "ietlab/roof.hpp"

namespace ietlab {

// Final window: eta < 2 tau' - tau, xi > max(99/100, tau' eta).
// Standing window: eta < tau'(2 tau' - tau), xi > max(11/12, tau' eta).
enum class ParamWindow { Final, Standing };

struct ParamCandidate {
    mpq_class tau, tau_prime, eta, xi;
};

struct DcParams {
    mpq_class tau, tau_prime, eta, xi;
    mpq_class nu;
    std::size_t lbar = 1;
    std::size_t d = 2;
    std::size_t L = 1;
    ParamWindow window = ParamWindow::Final;

    double tau_d() const { return tau.get_d(); }
    double tau_prime_d() const { return tau_prime.get_d(); }
    double eta_d() const { return eta.get_d(); }
    double xi_d() const { return xi.get_d(); }
};

// floor(log_d x) for rational x > 0, exact.
long floor_log(const mpq_class& x, std::size_t d);
// lbar (1 + floor(log_d(2 nu^2))).
std::size_t window_length(std::size_t lbar, const mpq_class& nu, std::size_t d);

// Throws ConstraintViolation naming the first violated inequality.
DcParams validate_params(const ParamCandidate& c, const mpq_class& nu, std::size_t lbar, std::size_t d,
                         ParamWindow window = ParamWindow::Final);
// Direct inequality oracle shared by tests and the CLI: name of the first violated constraint.
std::optional<std::string> first_violation(const ParamCandidate& c, ParamWindow window);

// q_l and ||A_l|| sequences; normA[l] = ||B^(n_l, n_{l+1})||.
struct DcSeries {
    std::vector<mpz_class> q;
    std::vector<mpz_class> normA;

    static DcSeries from(const Acceleration& acc);
};

struct MixingDcReport {
    bool insufficient_depth = false;
    std::size_t levels = 0;
    std::vector<bool> balanced;          // per level
    std::vector<bool> window_positive;   // per level with l + lbar available
    double D = 0.0;                      // max Hilbert diameter of the lbar windows
    std::vector<double> integrability;   // ||A_l|| / l^tau for l >= 1
    double threshold = 1.0;
    std::optional<std::size_t> below_from;  // smallest l0 with every later value below threshold
    bool all_balanced = false, all_positive = false;
};

MixingDcReport mixing_dc_report(const Acceleration& acc, const DcParams& params, std::size_t depth,
                                double threshold = 1.0);

struct RatnerDcPartial {
    std::vector<std::size_t> bad_indices;   // l in [1, depth] with window product > l^xi
    double partial_sum = 0.0;               // sum over bad l of (log q_l)^-eta
    std::vector<double> running_sum;        // partial sum after each l
    std::size_t horizon = 0;                // last l examined
};

RatnerDcPartial ratner_dc_partial(const DcSeries& s, const DcParams& params, std::size_t depth,
                                  mpfr_prec_t prec = default_precision());

// q_{l+L} sigma_l^xi <= q_l, decided with outward error bounds.
bool k_set_membership(const DcSeries& s, const DcParams& params, std::size_t l, mpfr_prec_t prec = default_precision());
// sigma_l for a series entry; zero when ||A_l|| = 1.
double series_sigma(const DcSeries& s, std::size_t l, double tau_prime);

struct SummabilityPartial {
    std::vector<std::size_t> outside;       // l in [1, depth] not in K_T
    std::vector<std::size_t> members;
    double sum_sigma_eta = 0.0;
    double sum_measures = 0.0;
    double sum_bounds = 0.0;                // sum of the measure bounds 2|A| nu^2 sigma^2 ||A_l||
    std::vector<double> running_sigma_eta, running_measures;
    std::size_t exact_levels = 0;           // levels whose measure was computed exactly
    std::size_t horizon = 0;
};

// Measures are exact up to level `exact_max_level` and double-precision beyond.
SummabilityPartial summability_partial(const Acceleration& acc, const DcParams& params, std::size_t depth,
                                       std::size_t exact_max_level = 12, mpfr_prec_t prec = default_precision());

// Double-precision measure of the same union of preimages used by sigma_set.
double sigma_set_measure_fast(const Iet& T, double radius, long long preimages);

// Window products ||A_l|| ... ||A_{l+L}||.
mpz_class window_norm_product(const DcSeries& s, std::size_t l, std::size_t L);

}  // namespace ietlab
