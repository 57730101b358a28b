#ifndef CAPRIMES_ORACLE_HPP
#define CAPRIMES_ORACLE_HPP

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "caprimes/exactlinalg.hpp"

namespace caprimes {

/// GF(p^k). Elements are encoded as integers sum c_e p^e, where c_e is the
/// coefficient of t^e in the residue modulo the defining polynomial. For
/// k > 1 the defining polynomial is the first monic primitive polynomial of
/// degree k in lexicographic order of (c_{k-1}, ..., c_0).
class GaloisField {
public:
    using Elem = std::uint32_t;

    GaloisField(std::uint32_t p, std::uint32_t k = 1);

    std::uint32_t characteristic() const { return p_; }
    std::uint32_t degree() const { return k_; }
    std::uint32_t order() const { return q_; }
    /// Defining polynomial, lowest degree first (monic, length k + 1).
    const std::vector<std::uint32_t>& modulus() const { return modulus_; }

    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    /// Image of an integer in the prime subfield.
    Elem from_int(long v) const;

    Elem add(Elem a, Elem b) const;
    Elem sub(Elem a, Elem b) const;
    Elem neg(Elem a) const { return sub(0, a); }
    Elem mul(Elem a, Elem b) const;
    Elem inv(Elem a) const;

private:
    std::uint32_t p_, k_, q_;
    std::vector<std::uint32_t> modulus_;
    std::vector<Elem> exp_;                 // exp_[i] = g^i, k > 1 only
    std::vector<std::uint32_t> log_;        // log_[a] for a != 0
};

/// Univariate polynomial over a GaloisField, lowest degree first, no trailing
/// zeros (the zero polynomial is empty).
class FqPoly {
public:
    using Elem = GaloisField::Elem;

    explicit FqPoly(std::shared_ptr<const GaloisField> field, std::vector<Elem> low_first = {});
    /// Builds from integer coefficients, highest degree first, reduced into the prime subfield.
    static FqPoly from_ints(std::shared_ptr<const GaloisField> field, const std::vector<long>& high_first);

    const GaloisField& field() const { return *field_; }
    const std::shared_ptr<const GaloisField>& field_ptr() const { return field_; }
    const std::vector<Elem>& coefficients() const { return c_; }
    std::vector<Elem> high_first() const;

    bool is_zero() const { return c_.empty(); }
    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    Elem leading() const { return c_.empty() ? 0 : c_.back(); }
    bool is_monic() const { return !c_.empty() && c_.back() == field_->one(); }

    FqPoly monic() const;
    FqPoly operator+(const FqPoly& o) const;
    FqPoly operator-(const FqPoly& o) const;
    FqPoly operator*(const FqPoly& o) const;
    FqPoly operator%(const FqPoly& o) const;
    /// Exact quotient and remainder.
    std::pair<FqPoly, FqPoly> divmod(const FqPoly& o) const;
    bool operator==(const FqPoly& o) const { return c_ == o.c_; }

    std::string to_string() const;

private:
    void trim();

    std::shared_ptr<const GaloisField> field_;
    std::vector<Elem> c_;
};

using FpUniPoly = FqPoly;

/// Monic gcd; gcd(0, 0) = 0.
FqPoly gcd(const FqPoly& a, const FqPoly& b);

/// binom(m, k) mod p by Lucas' theorem.
std::uint32_t binomial_mod(std::uint64_t m, std::uint64_t k, std::uint32_t p);

/// i-th Hasse derivative: sum_m binom(m, i) c_m x^(m-i).
FqPoly hasse_derivative(const FqPoly& f, int i);

/// Same over the integers (coefficients lowest degree first).
std::vector<Integer> hasse_derivative(const std::vector<Integer>& f, int i);
std::vector<Integer> formal_derivative(const std::vector<Integer>& f);

/// True iff gcd(f, H_i(f)) is non-constant for each i in [1, deg f - 1].
/// A vanishing H_i(f) counts as sharing a factor.
bool is_casas_alvero(const FqPoly& f);

/// (x - b)^n.
FqPoly linear_power(std::shared_ptr<const GaloisField> field, GaloisField::Elem b, int n);

class SearchBudgetExceeded : public std::runtime_error {
public:
    SearchBudgetExceeded(Integer required, std::uint64_t budget);
    const Integer& required() const { return required_; }

private:
    Integer required_;
};

struct SearchResult {
    int n = 0;
    std::uint32_t p = 0;
    std::uint32_t k = 1;
    std::uint32_t q = 0;
    std::vector<std::uint32_t> modulus;   ///< lowest degree first
    std::uint64_t searched = 0;
    std::vector<FqPoly> witnesses;        ///< ordered by coefficient vector, highest degree first
};

inline constexpr std::uint64_t kDefaultSearchBudget = 100'000'000;

/// All monic degree-n Casas-Alvero polynomials over GF(p^k) other than the
/// (x - b)^n. Refuses when q^n exceeds the budget.
SearchResult search_counterexamples(int n, std::uint32_t p, std::uint32_t k = 1,
                                    std::uint64_t budget = kDefaultSearchBudget, Exec exec = Exec::parallel);

nlohmann::ordered_json to_json(const SearchResult& result);

}  // namespace caprimes

#endif  // CAPRIMES_ORACLE_HPP
