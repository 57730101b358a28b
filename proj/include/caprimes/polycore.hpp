#ifndef CAPRIMES_POLYCORE_HPP
#define CAPRIMES_POLYCORE_HPP

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace caprimes {

using Integer = mpz_class;

/// Multi-index of a monomial x1^e1 * ... * xk^ek.
class ExponentVector {
public:
    ExponentVector() = default;
    explicit ExponentVector(std::size_t n_vars) : exps_(n_vars, 0) {}
    ExponentVector(std::initializer_list<std::uint32_t> exps) : exps_(exps) {}
    explicit ExponentVector(std::vector<std::uint32_t> exps) : exps_(std::move(exps)) {}

    std::size_t size() const { return exps_.size(); }
    std::uint32_t operator[](std::size_t k) const { return exps_[k]; }
    std::uint32_t& operator[](std::size_t k) { return exps_[k]; }
    std::uint64_t total_degree() const;

    const std::vector<std::uint32_t>& values() const { return exps_; }

    friend bool operator==(const ExponentVector&, const ExponentVector&) = default;

private:
    std::vector<std::uint32_t> exps_;
};

/// Strict weak order placing the larger monomial (graded reverse lex) first.
struct GrevlexGreater {
    bool operator()(const ExponentVector& a, const ExponentVector& b) const;
};

struct ExponentVectorHash {
    std::size_t operator()(const ExponentVector& e) const noexcept;
};

/// Sparse polynomial in n_vars variables with integer coefficients.
/// Terms are kept in canonical form: no zero coefficients, iteration in
/// decreasing grevlex order.
class MultiPoly {
public:
    using TermMap = std::map<ExponentVector, Integer, GrevlexGreater>;

    explicit MultiPoly(std::size_t n_vars);

    static MultiPoly constant(std::size_t n_vars, const Integer& c);
    /// x_k for 1-based k.
    static MultiPoly variable(std::size_t n_vars, std::size_t k);

    std::size_t n_vars() const { return n_vars_; }
    const TermMap& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    Integer coefficient(const ExponentVector& e) const;
    /// Adds c * x^e, collecting like terms.
    void add_term(const ExponentVector& e, const Integer& c);

    bool is_homogeneous() const;
    /// Largest total degree of a term; 0 for the zero polynomial.
    std::uint64_t total_degree() const;
    Integer max_abs_coefficient() const;

    MultiPoly operator-() const;
    MultiPoly& operator+=(const MultiPoly& other);
    MultiPoly& operator-=(const MultiPoly& other);
    friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
    friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
    friend bool operator==(const MultiPoly& a, const MultiPoly& b);

    /// Renders terms in canonical order, e.g. "-2*x1 + x2".
    std::string to_string() const;

private:
    void check_same_ring(const MultiPoly& other) const;

    std::size_t n_vars_;
    TermMap terms_;
};

/// i-th elementary symmetric polynomial in n_vars variables.
MultiPoly elementary_symmetric(std::size_t n_vars, std::size_t i);

/// Applies the involution x_j -> -x_j, x_k -> x_k - x_j (k != j) to f, which
/// must live in n-1 variables. j == n is the identity.
MultiPoly phi_apply(const MultiPoly& f, int j, int n);

/// phi_j applied to the i-th elementary symmetric polynomial in n-1 variables.
MultiPoly build_G(int n, int j, int i);

/// f * x^alpha.
MultiPoly mul_monomial(const MultiPoly& f, const ExponentVector& alpha);

/// Read-only table of build_G(n, j, i) for all j in [1, n], i in [1, n-1].
class GTable {
public:
    explicit GTable(int n);

    int degree() const { return n_; }
    const MultiPoly& at(int j, int i) const;

private:
    int n_;
    std::vector<MultiPoly> table_;
};

}  // namespace caprimes

#endif  // CAPRIMES_POLYCORE_HPP
