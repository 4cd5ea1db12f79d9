#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "ietlab/iet.hpp"
#include "ietlab/matrix.hpp"

namespace ietlab {

enum class StepType { Top, Bottom };

inline char step_char(StepType t) { return t == StepType::Top ? 't' : 'b'; }

struct RvStep {
    Iet iet;        // induced map on the shortened interval, lengths not renormalized
    IntMatrix B;    // lambda = B lambda'
    StepType type;
    int winner;
    int loser;
};

// Combinatorial part of a step of the given type.
Permutation rauzy_move(const Permutation& p, StepType type, int* winner = nullptr, int* loser = nullptr);

RvStep rv_step(const Iet& T, std::size_t index = 0);

// Single-step matrix that a step from `before` could emit.
bool is_legal_step(const Permutation& before, const IntMatrix& B);

class InductionTrace {
public:
    explicit InductionTrace(Iet base);

    const Iet& base() const { return iets_.front(); }
    std::size_t depth() const { return types_.size(); }
    const Iet& at(std::size_t n) const { return iets_.at(n); }
    StepType type(std::size_t k) const { return types_.at(k); }
    const IntMatrix& step_matrix(std::size_t k) const { return steps_.at(k); }
    const IntMatrix& product(std::size_t n) const { return prefix_.at(n); }
    IntMatrix product(std::size_t m, std::size_t n) const;
    std::vector<mpz_class> heights(std::size_t n) const { return prefix_.at(n).column_sums(); }
    mpz_class max_height(std::size_t n) const;
    mpz_class min_height(std::size_t n) const;
    const ExactScalar& interval_length(std::size_t n) const { return iets_.at(n).total(); }

    // Extends to n steps; throws RVUndefined at the first undefined step.
    void extend(std::size_t n);
    // Extends as far as possible up to n; returns the depth reached.
    std::size_t extend_until(std::size_t n);

    std::string word() const;
    std::uint64_t fingerprint() const;

private:
    std::vector<Iet> iets_;
    std::vector<StepType> types_;
    std::vector<IntMatrix> steps_;
    std::vector<IntMatrix> prefix_;
};

InductionTrace induct(InductionTrace trace, std::size_t n);

struct Floor {
    int letter;
    std::size_t level;
    ExactScalar left, right;
};

struct TowerSystem {
    std::size_t n = 0;
    std::vector<ExactScalar> base_left, base_right;  // per letter
    std::vector<mpz_class> heights;                  // per letter
    std::vector<Floor> floors;
    bool partition_ok = false;
    bool floors_map_up = false;
};

TowerSystem towers(const InductionTrace& trace, std::size_t n);
bool floors_partition(std::vector<Floor> floors, const ExactScalar& total);

std::size_t return_time_oracle(const InductionTrace& trace, std::size_t n, int alpha);

bool balance_check(const InductionTrace& trace, std::size_t n, const mpq_class& nu);
bool positivity_check(const InductionTrace& trace, std::size_t m, std::size_t n);

struct AccelTimes {
    std::vector<std::size_t> times;
    std::optional<std::size_t> lbar;
    mpq_class nu;
    std::string diagnostic;
};

AccelTimes select_accel_times(const InductionTrace& trace, const mpq_class& nu, std::size_t lbar_max);
// Times at which the step type switches (Zorich grouping of same-type runs).
std::vector<std::size_t> zorich_times(const InductionTrace& trace);

double hilbert_distance(const std::vector<double>& x, const std::vector<double>& y);
// exp(d_H) computed exactly.
mpq_class hilbert_ratio(const std::vector<mpq_class>& x, const std::vector<mpq_class>& y);
// +infinity when A has a zero entry.
double projective_diameter(const IntMatrix& A);
mpq_class nu_col(const IntMatrix& C);
double jacobian(const IntMatrix& D, const std::vector<double>& lambda);

}  // namespace ietlab
