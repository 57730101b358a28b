#ifndef CAPRIMES_BOUNDS_HPP
#define CAPRIMES_BOUNDS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "caprimes/polycore.hpp"

namespace caprimes {

/// Above this many columns the factorial C! is not expanded.
inline constexpr std::uint64_t kMaxExactBoundColumns = 200'000;

/// One value binom(i + n - 2, n - 2) of the b-multiset with its multiplicity.
struct BoundFactor {
    int i = 0;
    Integer value;
    Integer multiplicity;
};

/// The two upper bounds on bad primes for degree n:
///   bound5 = C! * prod_i binom(i+n-2, n-2)^binom(d-i+n-2, n-2)
///   bound6 = C! * (product of the C largest elements of that multiset)
struct BoundReport {
    int n = 0;
    Integer C;
    Integer D;
    std::vector<BoundFactor> multiset;  ///< non-decreasing value, multiplicities sum to D
    std::vector<BoundFactor> top;       ///< the C largest elements, grouped
    int attaining_i = 0;                ///< i with b_{D-C+1} = binom(i+n-2, n-2)

    bool expanded = false;              ///< bound5/bound6 hold exact integers
    Integer bound5;
    Integer bound6;
    std::string bound5_factored;
    std::string bound6_factored;
    std::uint64_t bound5_digits = 0;    ///< exact when expanded, else from log10
    std::uint64_t bound6_digits = 0;
    double bound5_log10 = 0.0;
    double bound6_log10 = 0.0;
};

/// Exact bound5. Throws std::length_error when C exceeds kMaxExactBoundColumns.
Integer upper_bound(int n);

BoundReport improved_bound(int n);

/// Number of decimal digits of |v| (1 for zero).
std::uint64_t decimal_digits(const Integer& v);

}  // namespace caprimes

#endif  // CAPRIMES_BOUNDS_HPP
