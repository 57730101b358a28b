#include "caprimes/macaulay.hpp"

#include <algorithm>
#include <charconv>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <openssl/evp.h>

namespace caprimes {

Integer binomial(long m, long k) {
    if (k < 0 || m < 0 || k > m) return 0;
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(m), static_cast<unsigned long>(k));
    return r;
}

namespace {

std::size_t to_size(const Integer& v, const char* what) {
    if (!v.fits_ulong_p()) throw std::overflow_error(std::string(what) + " does not fit in memory indices");
    return static_cast<std::size_t>(v.get_ui());
}

}  // namespace

std::size_t DegreeData::columns() const { return to_size(C, "column count"); }
std::size_t DegreeData::rows() const { return to_size(D, "row count"); }

DegreeData degree_data(int n) {
    if (n < 2) throw std::invalid_argument("degree_data: n must be at least 2");
    DegreeData dd;
    dd.n = n;
    dd.d = (n * n - 3 * n + 4) / 2;
    dd.C = binomial((n * n - n) / 2, n - 2);
    dd.D = 0;
    for (int i = 1; i <= n - 1; ++i) dd.D += binomial(dd.d - i + n - 2, n - 2);
    return dd;
}

Tuple Tuple::parse(std::string_view text, int n) {
    std::vector<int> entries;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto comma = text.find(',', pos);
        if (comma == std::string_view::npos) comma = text.size();
        auto field = text.substr(pos, comma - pos);
        int value = 0;
        auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
        if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size())
            throw std::invalid_argument("tuple: malformed entry '" + std::string(field) + "'");
        entries.push_back(value);
        pos = comma + 1;
    }
    Tuple t(std::move(entries));
    t.validate(n);
    return t;
}

void Tuple::validate(int n) const {
    if (n < 2) throw std::invalid_argument("tuple: degree must be at least 2");
    if (entries_.size() != static_cast<std::size_t>(n - 1))
        throw std::invalid_argument("tuple: expected " + std::to_string(n - 1) + " entries, got " +
                                    std::to_string(entries_.size()));
    for (int j : entries_)
        if (j < 1 || j > n)
            throw std::invalid_argument("tuple: entry " + std::to_string(j) + " outside [1, " + std::to_string(n) + "]");
}

std::string Tuple::to_string() const {
    std::string s;
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        if (k) s += ',';
        s += std::to_string(entries_[k]);
    }
    return s;
}

SparseIntMatrix SparseIntMatrix::from_dense(const std::vector<std::vector<Integer>>& dense) {
    SparseIntMatrix m(dense.size(), dense.empty() ? 0 : dense.front().size());
    for (std::size_t r = 0; r < dense.size(); ++r) {
        if (dense[r].size() != m.n_cols) throw std::invalid_argument("from_dense: ragged rows");
        for (std::size_t c = 0; c < m.n_cols; ++c)
            if (dense[r][c] != 0) m.rows[r].emplace_back(static_cast<std::uint32_t>(c), dense[r][c]);
    }
    return m;
}

std::vector<std::vector<Integer>> SparseIntMatrix::dense() const {
    std::vector<std::vector<Integer>> out(n_rows, std::vector<Integer>(n_cols, 0));
    for (std::size_t r = 0; r < n_rows; ++r)
        for (const auto& [c, v] : rows[r]) out[r][c] = v;
    return out;
}

std::size_t SparseIntMatrix::nonzeros() const {
    std::size_t total = 0;
    for (const auto& row : rows) total += row.size();
    return total;
}

std::string MacaulayMatrix::export_triplets() const {
    std::ostringstream out;
    out << matrix.n_rows << ' ' << matrix.n_cols << ' ' << data.n << ' ' << tuple.to_string() << '\n';
    for (std::size_t r = 0; r < matrix.n_rows; ++r)
        for (const auto& [c, v] : matrix.rows[r]) out << (r + 1) << ' ' << (c + 1) << ' ' << v.get_str() << '\n';
    return out.str();
}

std::string MacaulayMatrix::content_hash() const {
    const std::string text = export_triplets();
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("content_hash: SHA-256 failed");
    std::ostringstream hex;
    hex << std::hex << std::setfill('0');
    for (unsigned int k = 0; k < len; ++k) hex << std::setw(2) << static_cast<int>(digest[k]);
    return hex.str();
}

std::vector<ExponentVector> enumerate_monomials(std::size_t n_vars, std::uint32_t deg) {
    std::vector<ExponentVector> out;
    if (n_vars == 0) return out;
    ExponentVector e(n_vars);
    // Distribute deg over the first n_vars-1 slots; the last slot takes the rest.
    auto recurse = [&](auto&& self, std::size_t k, std::uint32_t left) -> void {
        if (k + 1 == n_vars) {
            e[k] = left;
            out.push_back(e);
            return;
        }
        for (std::uint32_t v = 0; v <= left; ++v) {
            e[k] = v;
            self(self, k + 1, left - v);
        }
    };
    recurse(recurse, 0, deg);
    std::sort(out.begin(), out.end(), GrevlexGreater{});
    return out;
}

MacaulayMatrix build_matrix(int n, const Tuple& tuple, const GTable& g_table) {
    tuple.validate(n);
    if (g_table.degree() != n) throw std::invalid_argument("build_matrix: G table built for a different degree");

    MacaulayMatrix m;
    m.data = degree_data(n);
    m.tuple = tuple;
    const auto n_vars = static_cast<std::size_t>(n - 1);
    m.columns = enumerate_monomials(n_vars, static_cast<std::uint32_t>(m.data.d));

    std::unordered_map<ExponentVector, std::uint32_t, ExponentVectorHash> column_of;
    column_of.reserve(m.columns.size());
    for (std::size_t c = 0; c < m.columns.size(); ++c) column_of.emplace(m.columns[c], static_cast<std::uint32_t>(c));

    m.matrix = SparseIntMatrix(m.data.rows(), m.columns.size());
    m.row_labels.reserve(m.matrix.n_rows);
    std::size_t r = 0;
    ExponentVector shifted(n_vars);
    for (int i = 1; i <= n - 1; ++i) {
        const MultiPoly& g = g_table.at(tuple[static_cast<std::size_t>(i - 1)], i);
        for (auto& alpha : enumerate_monomials(n_vars, static_cast<std::uint32_t>(m.data.d - i))) {
            auto& row = m.matrix.rows[r];
            row.reserve(g.term_count());
            for (const auto& [e, coeff] : g.terms()) {
                for (std::size_t k = 0; k < n_vars; ++k) shifted[k] = e[k] + alpha[k];
                row.emplace_back(column_of.at(shifted), coeff);
            }
            std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
            m.row_labels.push_back({i, std::move(alpha)});
            ++r;
        }
    }
    if (r != m.matrix.n_rows) throw std::logic_error("build_matrix: row count disagrees with degree data");
    return m;
}

Tuple canonicalize(const Tuple& tuple, int n) {
    tuple.validate(n);
    std::vector<int> relabel(static_cast<std::size_t>(n) + 1, 0);
    int next = 1;
    std::vector<int> out;
    out.reserve(tuple.size());
    for (int j : tuple.entries()) {
        if (j == n) {
            out.push_back(n);
            continue;
        }
        auto& slot = relabel[static_cast<std::size_t>(j)];
        if (slot == 0) slot = next++;
        out.push_back(slot);
    }
    return Tuple(std::move(out));
}

namespace {

std::size_t moved_entries(const Tuple& t, int n) {
    return static_cast<std::size_t>(std::count_if(t.entries().begin(), t.entries().end(), [n](int j) { return j != n; }));
}

void sort_schedule(std::vector<TupleOrbit>& orbits, int n) {
    std::sort(orbits.begin(), orbits.end(), [n](const TupleOrbit& a, const TupleOrbit& b) {
        auto ka = moved_entries(a.representative, n);
        auto kb = moved_entries(b.representative, n);
        if (ka != kb) return ka < kb;
        return a.representative < b.representative;
    });
}

template <typename Visit>
void for_each_tuple(int n, Visit&& visit) {
    std::vector<int> entries(static_cast<std::size_t>(n - 1), 1);
    while (true) {
        visit(Tuple(entries));
        std::size_t k = entries.size();
        while (k > 0 && entries[k - 1] == n) entries[--k] = 1;
        if (k == 0) return;
        ++entries[k - 1];
    }
}

}  // namespace

std::vector<TupleOrbit> canonical_tuples(int n) {
    if (n < 2) throw std::invalid_argument("canonical_tuples: n must be at least 2");
    std::map<Tuple, std::uint64_t> counts;
    for_each_tuple(n, [&](const Tuple& t) { ++counts[canonicalize(t, n)]; });
    std::vector<TupleOrbit> orbits;
    orbits.reserve(counts.size());
    for (auto& [rep, size] : counts) orbits.push_back({rep, size});
    sort_schedule(orbits, n);
    return orbits;
}

std::vector<TupleOrbit> all_tuples(int n) {
    if (n < 2) throw std::invalid_argument("all_tuples: n must be at least 2");
    std::vector<TupleOrbit> orbits;
    for_each_tuple(n, [&](const Tuple& t) { orbits.push_back({t, 1}); });
    sort_schedule(orbits, n);
    return orbits;
}

}  // namespace caprimes
