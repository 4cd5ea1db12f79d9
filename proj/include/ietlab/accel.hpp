#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "ietlab/rauzy_veech.hpp"

namespace ietlab {

// A trace together with its balanced, positive acceleration n_0 < n_1 < ...
// q(l) is the largest height at n_l and A(l) = B^(n_l, n_{l+1}).
class Acceleration {
public:
    Acceleration(InductionTrace trace, AccelTimes times);

    // Induces up to `depth` steps (stopping early on RVUndefined) and selects times.
    static Acceleration build(const Iet& T, std::size_t depth, const mpq_class& nu, std::size_t lbar_max);

    const InductionTrace& trace() const { return trace_; }
    const Iet& base() const { return trace_.base(); }
    const AccelTimes& times() const { return times_; }
    std::size_t count() const { return times_.times.size(); }
    std::size_t n(std::size_t l) const { return times_.times.at(l); }
    const mpq_class& nu() const { return times_.nu; }
    std::size_t lbar() const;

    const mpz_class& q(std::size_t l) const { return q_.at(l); }
    const mpz_class& min_height(std::size_t l) const { return hmin_.at(l); }
    IntMatrix A(std::size_t l) const { return trace_.product(n(l), n(l + 1)); }
    const mpz_class& norm_A(std::size_t l) const { return normA_.at(l); }
    std::size_t norm_count() const { return normA_.size(); }
    const ExactScalar& length(std::size_t l) const { return trace_.interval_length(n(l)); }

    // l with q(l) <= r < q(l+1).
    std::optional<std::size_t> level_of(const mpz_class& r) const;

private:
    InductionTrace trace_;
    AccelTimes times_;
    std::vector<mpz_class> q_, hmin_, normA_;
};

}  // namespace ietlab
