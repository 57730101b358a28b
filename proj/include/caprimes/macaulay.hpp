#ifndef CAPRIMES_MACAULAY_HPP
#define CAPRIMES_MACAULAY_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "caprimes/polycore.hpp"

namespace caprimes {

/// Size data of the coefficient matrices for degree n.
///   d = (n^2 - 3n + 4) / 2           (Macaulay degree)
///   C = binom((n^2 - n) / 2, n - 2)  (monomials of degree d in n-1 variables)
///   D = sum_{i=1}^{n-1} binom(d - i + n - 2, n - 2)
struct DegreeData {
    int n = 0;
    int d = 0;
    Integer C;
    Integer D;

    std::size_t columns() const;
    std::size_t rows() const;
};

DegreeData degree_data(int n);

/// Exact binomial coefficient; zero when k < 0 or k > m.
Integer binomial(long m, long k);

/// A tuple (j_1, ..., j_{n-1}) with entries in [1, n].
class Tuple {
public:
    Tuple() = default;
    explicit Tuple(std::vector<int> entries) : entries_(std::move(entries)) {}

    /// Parses "1,2,3" and validates it for degree n.
    static Tuple parse(std::string_view text, int n);

    const std::vector<int>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    int operator[](std::size_t k) const { return entries_[k]; }

    /// Throws std::invalid_argument unless the tuple is valid for degree n.
    void validate(int n) const;
    std::string to_string() const;

    friend auto operator<=>(const Tuple&, const Tuple&) = default;

private:
    std::vector<int> entries_;
};

/// Integer matrix stored as sorted sparse rows of (column, value).
struct SparseIntMatrix {
    using Entry = std::pair<std::uint32_t, Integer>;

    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::vector<std::vector<Entry>> rows;

    SparseIntMatrix() = default;
    SparseIntMatrix(std::size_t r, std::size_t c) : n_rows(r), n_cols(c), rows(r) {}

    static SparseIntMatrix from_dense(const std::vector<std::vector<Integer>>& dense);
    std::vector<std::vector<Integer>> dense() const;
    std::size_t nonzeros() const;

    friend bool operator==(const SparseIntMatrix&, const SparseIntMatrix&) = default;
};

struct RowLabel {
    int i = 0;               ///< which G_{T,i}
    ExponentVector alpha;    ///< multiplier monomial, |alpha| = d - i
};

/// Rows are G_{T,i} * x^alpha for i ascending and alpha in canonical order;
/// columns are the degree-d monomials in canonical order.
struct MacaulayMatrix {
    DegreeData data;
    Tuple tuple;
    std::vector<ExponentVector> columns;
    std::vector<RowLabel> row_labels;
    SparseIntMatrix matrix;

    /// Triplet export: header "D C n tuple", then one 1-based "row col value"
    /// line per nonzero.
    std::string export_triplets() const;
    /// SHA-256 of the triplet export, lowercase hex.
    std::string content_hash() const;
};

/// All exponent vectors of total degree deg, in decreasing grevlex order.
std::vector<ExponentVector> enumerate_monomials(std::size_t n_vars, std::uint32_t deg);

MacaulayMatrix build_matrix(int n, const Tuple& tuple, const GTable& g_table);

struct TupleOrbit {
    Tuple representative;
    std::uint64_t size = 0;
};

/// Relabels the non-n entries of a tuple to first-occurrence order
/// (1, 2, ...), giving the representative of its orbit under permutations
/// of the variables.
Tuple canonicalize(const Tuple& tuple, int n);

/// One representative per relabeling orbit with its size, ordered by the
/// number of entries different from n, then lexicographically.
std::vector<TupleOrbit> canonical_tuples(int n);

/// Every tuple in {1..n}^{n-1}, each as its own orbit of size 1, in the same
/// scheduling order as canonical_tuples.
std::vector<TupleOrbit> all_tuples(int n);

}  // namespace caprimes

#endif  // CAPRIMES_MACAULAY_HPP
