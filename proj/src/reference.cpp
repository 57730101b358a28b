#include "caprimes/reference.hpp"

#include <algorithm>
#include <numeric>

namespace caprimes::reference {

namespace {

std::vector<std::vector<mpq_class>> rational_rows(const SparseIntMatrix& m, std::span<const std::size_t> rows) {
    std::vector<std::vector<mpq_class>> a;
    for (std::size_t r : rows) {
        std::vector<mpq_class> row(m.n_cols, 0);
        for (const auto& [c, v] : m.rows.at(r)) row[c] = v;
        a.push_back(std::move(row));
    }
    return a;
}

std::vector<std::size_t> all_rows(const SparseIntMatrix& m) {
    std::vector<std::size_t> rows(m.n_rows);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return rows;
}

}  // namespace

std::size_t rank_rational(const SparseIntMatrix& m) {
    auto a = rational_rows(m, all_rows(m));
    std::size_t rank = 0;
    for (std::size_t c = 0; c < m.n_cols && rank < a.size(); ++c) {
        std::size_t p = rank;
        while (p < a.size() && a[p][c] == 0) ++p;
        if (p == a.size()) continue;
        std::swap(a[p], a[rank]);
        for (std::size_t r = rank + 1; r < a.size(); ++r) {
            if (a[r][c] == 0) continue;
            mpq_class f = a[r][c] / a[rank][c];
            for (std::size_t k = c; k < m.n_cols; ++k) a[r][k] -= f * a[rank][k];
        }
        ++rank;
    }
    return rank;
}

Integer determinant_rational(const SparseIntMatrix& m, std::span<const std::size_t> rows) {
    auto a = rational_rows(m, rows);
    const std::size_t n = m.n_cols;
    mpq_class det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(a[p], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            if (a[r][c] == 0) continue;
            mpq_class f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
        }
    }
    det.canonicalize();
    return det.get_num();
}

std::size_t rank_mod_p(const SparseIntMatrix& m, std::uint64_t p) {
    using u128 = unsigned __int128;
    std::vector<std::vector<std::uint64_t>> a(m.n_rows, std::vector<std::uint64_t>(m.n_cols, 0));
    for (std::size_t r = 0; r < m.n_rows; ++r)
        for (const auto& [c, v] : m.rows[r]) a[r][c] = mpz_fdiv_ui(v.get_mpz_t(), p);
    auto inverse = [p](std::uint64_t x) {
        std::uint64_t r = 1, e = p - 2;
        while (e) {
            if (e & 1) r = static_cast<std::uint64_t>(u128(r) * x % p);
            x = static_cast<std::uint64_t>(u128(x) * x % p);
            e >>= 1;
        }
        return r;
    };
    std::size_t rank = 0;
    for (std::size_t c = 0; c < m.n_cols && rank < a.size(); ++c) {
        std::size_t piv = rank;
        while (piv < a.size() && a[piv][c] == 0) ++piv;
        if (piv == a.size()) continue;
        std::swap(a[piv], a[rank]);
        const std::uint64_t inv = inverse(a[rank][c]);
        for (std::size_t r = rank + 1; r < a.size(); ++r) {
            if (a[r][c] == 0) continue;
            const std::uint64_t f = static_cast<std::uint64_t>(u128(a[r][c]) * inv % p);
            for (std::size_t k = c; k < m.n_cols; ++k)
                a[r][k] = static_cast<std::uint64_t>((u128(a[r][k]) + u128(p - f) * a[rank][k]) % p);
        }
        ++rank;
    }
    return rank;
}

Integer minor_gcd_exhaustive(const SparseIntMatrix& m) {
    if (m.n_rows < m.n_cols) return 0;
    std::vector<bool> pick(m.n_rows, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(m.n_cols), true);
    Integer g = 0;
    std::vector<std::size_t> rows;
    do {
        rows.clear();
        for (std::size_t r = 0; r < m.n_rows; ++r)
            if (pick[r]) rows.push_back(r);
        Integer det = determinant_rational(m, rows);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), det.get_mpz_t());
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return g;
}

DegreeReport bad_primes(int n, const CertifyConfig& config) {
    const GTable g_table(n);
    const auto schedule = all_tuples(n);
    std::vector<TupleCertificate> certs;
    for (const auto& orbit : schedule) certs.push_back(certify_tuple(n, orbit.representative, g_table, config, orbit.size));
    return aggregate(n, false, std::move(certs), schedule.size(), false);
}

SearchResult search_counterexamples(int n, std::uint32_t p, std::uint32_t k) {
    auto field = std::make_shared<const GaloisField>(p, k);
    const std::uint32_t q = field->order();
    SearchResult res;
    res.n = n;
    res.p = p;
    res.k = k;
    res.q = q;
    res.modulus = field->modulus();

    std::vector<GaloisField::Elem> c(static_cast<std::size_t>(n) + 1, 0);
    c[static_cast<std::size_t>(n)] = 1;
    std::vector<std::vector<GaloisField::Elem>> keys;
    while (true) {
        ++res.searched;
        FqPoly f(field, c);
        if (is_casas_alvero(f)) {
            bool is_power = false;
            for (std::uint32_t b = 0; b < q && !is_power; ++b) is_power = linear_power(field, b, n) == f;
            if (!is_power) keys.push_back(f.high_first());
        }
        std::size_t e = 0;
        while (e < static_cast<std::size_t>(n) && c[e] == q - 1) c[e++] = 0;
        if (e == static_cast<std::size_t>(n)) break;
        ++c[e];
    }
    std::sort(keys.begin(), keys.end());
    for (auto& key : keys) res.witnesses.emplace_back(field, std::vector<GaloisField::Elem>(key.rbegin(), key.rend()));
    return res;
}

}  // namespace caprimes::reference
