#ifndef CAPRIMES_EXACTLINALG_HPP
#define CAPRIMES_EXACTLINALG_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "caprimes/macaulay.hpp"

namespace caprimes {

/// Selects the OpenMP kernel or a single-threaded run of the same kernel.
enum class Exec { serial, parallel };

/// How Bareiss elimination picks the pivot row for each column.
struct PivotStrategy {
    enum class Kind {
        markowitz,  ///< fewest remaining nonzeros, then smallest |entry|, then lowest row
        random,     ///< uniform among the rows with a nonzero entry, seeded
    };
    Kind kind = Kind::markowitz;
    std::uint64_t seed = 0;
};

/// Raised when an exact division in fraction-free elimination leaves a
/// remainder. Indicates a bug, never a property of the input.
class InexactDivisionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct EliminationResult {
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_rows;  ///< in elimination order
    std::vector<std::size_t> pivot_cols;
    Integer last_pivot = 1;               ///< the rank x rank minor on the pivot rows/cols (pivot order)
};

/// Fraction-free (Bareiss) row elimination over the integers. Every
/// intermediate entry is a minor of the input, so all divisions are exact.
EliminationResult bareiss_eliminate(const SparseIntMatrix& m, const PivotStrategy& strategy = {},
                                    Exec exec = Exec::serial);

/// One maximal minor of an n_rows x n_cols matrix (n_rows >= n_cols).
struct MinorCertificate {
    Integer value;                         ///< 0 is the "rank deficient" flag
    std::vector<std::size_t> pivot_rows;   ///< ascending; value is the determinant of these rows
    std::vector<std::size_t> pivot_order;  ///< order the rows were chosen in

    bool is_zero() const { return value == 0; }
};

MinorCertificate nonzero_maximal_minor(const SparseIntMatrix& m, const PivotStrategy& strategy = {},
                                       Exec exec = Exec::serial);

std::size_t rank_over_rationals(const SparseIntMatrix& m, Exec exec = Exec::serial);

/// Rank over F_p. Throws std::invalid_argument if p is not prime.
std::size_t rank_mod_p(const SparseIntMatrix& m, std::uint64_t p, Exec exec = Exec::serial);
/// As rank_mod_p, for primes of any size.
std::size_t rank_mod_prime(const SparseIntMatrix& m, const Integer& p, Exec exec = Exec::serial);

/// Determinant of the square submatrix formed by the given rows, taken in the
/// given order.
Integer determinant_of_rows(const SparseIntMatrix& m, std::span<const std::size_t> rows);

class MinorLimitExceeded : public std::runtime_error {
public:
    MinorLimitExceeded(Integer required, std::uint64_t limit);
    const Integer& required() const { return required_; }
    std::uint64_t limit() const { return limit_; }

private:
    Integer required_;
    std::uint64_t limit_;
};

/// gcd of all maximal minors by enumeration of every row selection.
/// Returns 0 when the matrix is rank deficient. Refuses (MinorLimitExceeded)
/// when binom(n_rows, n_cols) > limit.
Integer minor_gcd_exhaustive(const SparseIntMatrix& m, std::uint64_t limit, Exec exec = Exec::serial);

/// gcd of all maximal minors, given any nonzero multiple of it (for example
/// one nonzero maximal minor). Computes the index of the row lattice in
/// Z^n_cols by triangularizing modulo the multiple.
Integer minor_gcd_modular(const SparseIntMatrix& m, const Integer& multiple);

bool is_probable_prime(const Integer& n);

struct FactorBudget {
    std::uint64_t trial_bound = 1'000'000;
    std::uint64_t pollard_iterations = 10'000'000;
};

struct FactorResult {
    std::vector<std::pair<Integer, unsigned>> factors;  ///< ascending primes
    Integer cofactor = 1;                                ///< unfactored part, 1 when complete
};

/// Trial division, then Miller-Rabin and Pollard-Brent rho within budget.
/// Throws std::invalid_argument for n < 1.
FactorResult factorize(const Integer& n, const FactorBudget& budget = {});

}  // namespace caprimes

#endif  // CAPRIMES_EXACTLINALG_HPP
