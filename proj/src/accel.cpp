#include "ietlab/accel.hpp"

#include "ietlab/errors.hpp"

namespace ietlab {

Acceleration::Acceleration(InductionTrace trace, AccelTimes times) : trace_(std::move(trace)), times_(std::move(times)) {
    for (std::size_t t : times_.times) {
        q_.push_back(trace_.max_height(t));
        hmin_.push_back(trace_.min_height(t));
    }
    for (std::size_t l = 0; l + 1 < times_.times.size(); ++l) normA_.push_back(A(l).norm());
}

Acceleration Acceleration::build(const Iet& T, std::size_t depth, const mpq_class& nu, std::size_t lbar_max) {
    InductionTrace tr(T);
    tr.extend_until(depth);
    AccelTimes at = select_accel_times(tr, nu, lbar_max);
    return Acceleration(std::move(tr), std::move(at));
}

std::size_t Acceleration::lbar() const {
    if (!times_.lbar) throw DomainError("acceleration has no positive window: " + times_.diagnostic);
    return *times_.lbar;
}

std::optional<std::size_t> Acceleration::level_of(const mpz_class& r) const {
    for (std::size_t l = 0; l + 1 < q_.size(); ++l)
        if (q_[l] <= r && r < q_[l + 1]) return l;
    return std::nullopt;
}

}  // namespace ietlab
