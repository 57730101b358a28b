#ifndef CAPRIMES_REFERENCE_HPP
#define CAPRIMES_REFERENCE_HPP

// Straightforward single-threaded implementations kept as test oracles and
// benchmark baselines for the OpenMP kernels.

#include <cstdint>
#include <span>
#include <vector>

#include "caprimes/certifier.hpp"
#include "caprimes/oracle.hpp"

namespace caprimes::reference {

/// Rank over Q by Gaussian elimination on rationals.
std::size_t rank_rational(const SparseIntMatrix& m);

/// Determinant over Q of the selected rows, in the given order.
Integer determinant_rational(const SparseIntMatrix& m, std::span<const std::size_t> rows);

/// Textbook Gaussian elimination over F_p with 128-bit products.
std::size_t rank_mod_p(const SparseIntMatrix& m, std::uint64_t p);

/// gcd of every maximal minor, each determinant taken over Q.
Integer minor_gcd_exhaustive(const SparseIntMatrix& m);

/// Certifies every tuple of {1..n}^{n-1} in order on the calling thread.
DegreeReport bad_primes(int n, const CertifyConfig& config);

/// Plain enumeration over GF(p^k), no parallelism or precomputed powers.
SearchResult search_counterexamples(int n, std::uint32_t p, std::uint32_t k = 1);

}  // namespace caprimes::reference

#endif  // CAPRIMES_REFERENCE_HPP
