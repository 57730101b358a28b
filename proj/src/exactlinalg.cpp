#include "caprimes/exactlinalg.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include <omp.h>

namespace caprimes {

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

/// Dense row-major copy of an integer matrix.
std::vector<mpz_class> to_dense(const SparseIntMatrix& m) {
    std::vector<mpz_class> a(m.n_rows * m.n_cols);
    for (std::size_t r = 0; r < m.n_rows; ++r)
        for (const auto& [c, v] : m.rows[r]) a[r * m.n_cols + c] = v;
    return a;
}

/// Sign of the permutation that sorts `order`.
int sort_sign(std::vector<std::size_t> order) {
    int sign = 1;
    for (std::size_t i = 0; i < order.size(); ++i) {
        while (order[i] != i) {
            // order holds ranks after the remap below, so cycles resolve by swaps.
            std::swap(order[i], order[order[i]]);
            sign = -sign;
        }
    }
    return sign;
}

std::vector<std::size_t> ranks_of(const std::vector<std::size_t>& values) {
    std::vector<std::size_t> idx(values.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<std::size_t> rank(values.size());
    for (std::size_t k = 0; k < idx.size(); ++k) rank[idx[k]] = k;
    return rank;
}

}  // namespace

EliminationResult bareiss_eliminate(const SparseIntMatrix& m, const PivotStrategy& strategy, Exec exec) {
    const std::size_t n_rows = m.n_rows;
    const std::size_t n_cols = m.n_cols;
    std::vector<mpz_class> a = to_dense(m);
    auto at = [&](std::size_t r, std::size_t c) -> mpz_class& { return a[r * n_cols + c]; };

    std::vector<std::size_t> active;
    for (std::size_t r = 0; r < n_rows; ++r)
        if (!m.rows[r].empty()) active.push_back(r);

    std::mt19937_64 rng(strategy.seed);
    EliminationResult res;
    mpz_class prev = 1;
    std::vector<std::size_t> candidates;

    for (std::size_t k = 0; k < n_cols && !active.empty(); ++k) {
        candidates.clear();
        for (std::size_t idx = 0; idx < active.size(); ++idx)
            if (sgn(at(active[idx], k)) != 0) candidates.push_back(idx);
        if (candidates.empty()) continue;

        std::size_t chosen = candidates.front();
        if (strategy.kind == PivotStrategy::Kind::random) {
            std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
            chosen = candidates[pick(rng)];
        } else {
            std::size_t best_nnz = kNone;
            for (std::size_t idx : candidates) {
                const std::size_t r = active[idx];
                std::size_t nnz = 0;
                for (std::size_t c = k; c < n_cols; ++c) nnz += sgn(at(r, c)) != 0;
                bool better = nnz < best_nnz;
                if (nnz == best_nnz) {
                    int cmp = mpz_cmpabs(at(r, k).get_mpz_t(), at(active[chosen], k).get_mpz_t());
                    better = cmp < 0 || (cmp == 0 && r < active[chosen]);
                }
                if (better) {
                    best_nnz = nnz;
                    chosen = idx;
                }
            }
        }

        const std::size_t p = active[chosen];
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(chosen));
        res.pivot_rows.push_back(p);
        res.pivot_cols.push_back(k);
        const mpz_class& piv = at(p, k);
        const bool divide = prev != 1;
        std::atomic<bool> inexact{false};

#pragma omp parallel if (exec == Exec::parallel && active.size() > 16)
        {
            mpz_class tmp, rem;
#pragma omp for schedule(static)
            for (std::size_t idx = 0; idx < active.size(); ++idx) {
                const std::size_t r = active[idx];
                mpz_class& lead = at(r, k);
                const bool eliminate = sgn(lead) != 0;
                for (std::size_t c = k + 1; c < n_cols; ++c) {
                    mpz_class& x = at(r, c);
                    if (eliminate) {
                        mpz_mul(tmp.get_mpz_t(), piv.get_mpz_t(), x.get_mpz_t());
                        mpz_submul(tmp.get_mpz_t(), lead.get_mpz_t(), at(p, c).get_mpz_t());
                    } else {
                        if (sgn(x) == 0) continue;
                        mpz_mul(tmp.get_mpz_t(), piv.get_mpz_t(), x.get_mpz_t());
                    }
                    if (divide) {
                        mpz_tdiv_qr(x.get_mpz_t(), rem.get_mpz_t(), tmp.get_mpz_t(), prev.get_mpz_t());
                        if (sgn(rem) != 0) inexact.store(true, std::memory_order_relaxed);
                    } else {
                        mpz_swap(x.get_mpz_t(), tmp.get_mpz_t());
                    }
                }
                lead = 0;
            }
        }
        if (inexact.load()) throw InexactDivisionError("bareiss_eliminate: inexact division");

        prev = piv;
        res.last_pivot = piv;
        // Rows that vanished on the remaining columns can never pivot again.
        std::erase_if(active, [&](std::size_t r) {
            for (std::size_t c = k + 1; c < n_cols; ++c)
                if (sgn(at(r, c)) != 0) return false;
            return true;
        });
    }
    res.rank = res.pivot_rows.size();
    return res;
}

MinorCertificate nonzero_maximal_minor(const SparseIntMatrix& m, const PivotStrategy& strategy, Exec exec) {
    MinorCertificate cert;
    cert.value = 0;
    if (m.n_rows < m.n_cols) return cert;
    auto elim = bareiss_eliminate(m, strategy, exec);
    if (elim.rank < m.n_cols) return cert;

    cert.pivot_order = elim.pivot_rows;
    cert.pivot_rows = elim.pivot_rows;
    std::sort(cert.pivot_rows.begin(), cert.pivot_rows.end());
    // last_pivot is the determinant with rows in pivot order; reorder rows ascending.
    cert.value = elim.last_pivot * sort_sign(ranks_of(elim.pivot_rows));
    return cert;
}

std::size_t rank_over_rationals(const SparseIntMatrix& m, Exec exec) {
    return bareiss_eliminate(m, {}, exec).rank;
}

namespace {

struct SmallMul {
    std::uint64_t p;
    std::uint64_t operator()(std::uint64_t a, std::uint64_t b) const { return a * b % p; }
};

struct WideMul {
    std::uint64_t p;
    std::uint64_t operator()(std::uint64_t a, std::uint64_t b) const {
        return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
    }
};

template <typename Mul>
std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, Mul mul) {
    std::uint64_t r = 1;
    while (e) {
        if (e & 1) r = mul(r, b);
        b = mul(b, b);
        e >>= 1;
    }
    return r;
}

template <typename Mul>
std::size_t rank_mod_kernel(const SparseIntMatrix& m, std::uint64_t p, Mul mul, Exec exec) {
    const std::size_t n_rows = m.n_rows;
    const std::size_t n_cols = m.n_cols;
    std::vector<std::uint64_t> a(n_rows * n_cols, 0);
    for (std::size_t r = 0; r < n_rows; ++r)
        for (const auto& [c, v] : m.rows[r]) a[r * n_cols + c] = mpz_fdiv_ui(v.get_mpz_t(), p);

    std::vector<std::size_t> active(n_rows);
    std::iota(active.begin(), active.end(), std::size_t{0});
    std::size_t rank = 0;
    for (std::size_t k = 0; k < n_cols && !active.empty(); ++k) {
        auto it = std::find_if(active.begin(), active.end(), [&](std::size_t r) { return a[r * n_cols + k] != 0; });
        if (it == active.end()) continue;
        const std::size_t piv_row = *it;
        active.erase(it);
        ++rank;

        const std::uint64_t* prow = &a[piv_row * n_cols];
        const std::uint64_t inv = pow_mod(prow[k], p - 2, mul);
#pragma omp parallel for if (exec == Exec::parallel && active.size() * (n_cols - k) > 4096) schedule(static)
        for (std::size_t idx = 0; idx < active.size(); ++idx) {
            std::uint64_t* row = &a[active[idx] * n_cols];
            if (row[k] == 0) continue;
            const std::uint64_t factor = p - mul(row[k], inv);
            for (std::size_t c = k + 1; c < n_cols; ++c) {
                if (prow[c] == 0) continue;
                std::uint64_t v = row[c] + mul(factor, prow[c]);
                row[c] = v >= p ? v - p : v;
            }
            row[k] = 0;
        }
    }
    return rank;
}

std::size_t rank_mod_big(const SparseIntMatrix& m, const Integer& p) {
    const std::size_t n_cols = m.n_cols;
    std::vector<std::vector<mpz_class>> a(m.n_rows, std::vector<mpz_class>(n_cols, 0));
    for (std::size_t r = 0; r < m.n_rows; ++r)
        for (const auto& [c, v] : m.rows[r]) mpz_fdiv_r(a[r][c].get_mpz_t(), v.get_mpz_t(), p.get_mpz_t());
    std::vector<std::size_t> active(m.n_rows);
    std::iota(active.begin(), active.end(), std::size_t{0});
    std::size_t rank = 0;
    mpz_class inv, factor;
    for (std::size_t k = 0; k < n_cols && !active.empty(); ++k) {
        auto it = std::find_if(active.begin(), active.end(), [&](std::size_t r) { return sgn(a[r][k]) != 0; });
        if (it == active.end()) continue;
        const auto& prow = a[*it];
        active.erase(it);
        ++rank;
        mpz_invert(inv.get_mpz_t(), prow[k].get_mpz_t(), p.get_mpz_t());
        for (std::size_t r : active) {
            auto& row = a[r];
            if (sgn(row[k]) == 0) continue;
            factor = row[k] * inv;
            for (std::size_t c = k + 1; c < n_cols; ++c) {
                row[c] -= factor * prow[c];
                mpz_fdiv_r(row[c].get_mpz_t(), row[c].get_mpz_t(), p.get_mpz_t());
            }
            row[k] = 0;
        }
    }
    return rank;
}

}  // namespace

std::size_t rank_mod_p(const SparseIntMatrix& m, std::uint64_t p, Exec exec) {
    if (!is_probable_prime(Integer(static_cast<unsigned long>(p))))
        throw std::invalid_argument("rank_mod_p: modulus " + std::to_string(p) + " is not prime");
    if (p < (std::uint64_t{1} << 32)) return rank_mod_kernel(m, p, SmallMul{p}, exec);
    return rank_mod_kernel(m, p, WideMul{p}, exec);
}

std::size_t rank_mod_prime(const SparseIntMatrix& m, const Integer& p, Exec exec) {
    if (p > 0 && p.fits_ulong_p()) return rank_mod_p(m, p.get_ui(), exec);
    if (!is_probable_prime(p)) throw std::invalid_argument("rank_mod_prime: modulus is not prime");
    return rank_mod_big(m, p);
}

namespace {

/// Bareiss determinant of a dense square matrix with partial pivoting.
template <typename T>
T bareiss_det(std::vector<T> a, std::size_t n) {
    T prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && a[p * n + k] == 0) ++p;
        if (p == n) return 0;
        if (p != k) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a[p * n + c], a[k * n + c]);
            sign = -sign;
        }
        const T piv = a[k * n + k];
        for (std::size_t r = k + 1; r < n; ++r) {
            const T lead = a[r * n + k];
            for (std::size_t c = k + 1; c < n; ++c) {
                T t = piv * a[r * n + c] - lead * a[k * n + c];
                if (t % prev != 0) throw InexactDivisionError("determinant: inexact division");
                a[r * n + c] = t / prev;
            }
            a[r * n + k] = 0;
        }
        prev = piv;
    }
    return sign > 0 ? prev : T(-prev);
}

Integer from_i128(__int128 v) {
    const bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
    Integer hi = static_cast<unsigned long>(u >> 64);
    Integer r = (hi << 64) + Integer(static_cast<unsigned long>(u & 0xffffffffffffffffULL));
    return neg ? Integer(-r) : r;
}

}  // namespace

Integer determinant_of_rows(const SparseIntMatrix& m, std::span<const std::size_t> rows) {
    const std::size_t n = m.n_cols;
    if (rows.size() != n) throw std::invalid_argument("determinant_of_rows: selection is not square");
    if (n == 0) return 1;

    // log2 of the Hadamard bound decides whether 128-bit arithmetic is exact.
    double log2_bound = 0.0;
    bool fits = true;
    for (std::size_t r : rows) {
        if (r >= m.n_rows) throw std::out_of_range("determinant_of_rows: row index out of range");
        double norm2 = 0.0;
        for (const auto& [c, v] : m.rows[r]) {
            if (!v.fits_slong_p()) fits = false;
            double x = v.get_d();
            norm2 += x * x;
        }
        if (norm2 == 0.0) return 0;
        log2_bound += 0.5 * std::log2(norm2);
    }

    if (fits && log2_bound < 61.0) {
        std::vector<__int128> a(n * n, 0);
        for (std::size_t k = 0; k < n; ++k)
            for (const auto& [c, v] : m.rows[rows[k]]) a[k * n + c] = v.get_si();
        return from_i128(bareiss_det(std::move(a), n));
    }
    std::vector<mpz_class> a(n * n, 0);
    for (std::size_t k = 0; k < n; ++k)
        for (const auto& [c, v] : m.rows[rows[k]]) a[k * n + c] = v;
    return bareiss_det(std::move(a), n);
}

MinorLimitExceeded::MinorLimitExceeded(Integer required, std::uint64_t limit)
    : std::runtime_error("exhaustive minor enumeration needs " + required.get_str() + " determinants, limit is " +
                         std::to_string(limit)),
      required_(std::move(required)),
      limit_(limit) {}

namespace {

/// The combination of rank `index` (lexicographic) of k elements from n.
std::vector<std::size_t> unrank_combination(std::uint64_t index, std::size_t n, std::size_t k) {
    std::vector<std::size_t> out;
    out.reserve(k);
    std::size_t next = 0;
    for (std::size_t slot = 0; slot < k; ++slot) {
        for (std::size_t v = next;; ++v) {
            const std::uint64_t block = binomial(static_cast<long>(n - v - 1), static_cast<long>(k - slot - 1)).get_ui();
            if (index < block) {
                out.push_back(v);
                next = v + 1;
                break;
            }
            index -= block;
        }
    }
    return out;
}

bool next_combination(std::vector<std::size_t>& comb, std::size_t n) {
    const std::size_t k = comb.size();
    std::size_t i = k;
    while (i > 0 && comb[i - 1] == n - k + i - 1) --i;
    if (i == 0) return false;
    ++comb[i - 1];
    for (std::size_t j = i; j < k; ++j) comb[j] = comb[j - 1] + 1;
    return true;
}

}  // namespace

Integer minor_gcd_exhaustive(const SparseIntMatrix& m, std::uint64_t limit, Exec exec) {
    if (m.n_rows < m.n_cols) return 0;
    const Integer total_big = binomial(static_cast<long>(m.n_rows), static_cast<long>(m.n_cols));
    if (total_big > limit) throw MinorLimitExceeded(total_big, limit);
    const std::uint64_t total = total_big.get_ui();
    if (m.n_cols == 0) return 1;

    const int threads = exec == Exec::parallel ? omp_get_max_threads() : 1;
    const std::uint64_t chunks = std::min<std::uint64_t>(total, static_cast<std::uint64_t>(threads) * 16);
    std::vector<Integer> partial(chunks, 0);
    std::atomic<bool> unit{false};

#pragma omp parallel for if (exec == Exec::parallel) schedule(dynamic, 1)
    for (std::uint64_t chunk = 0; chunk < chunks; ++chunk) {
        const std::uint64_t begin = total * chunk / chunks;
        const std::uint64_t end = total * (chunk + 1) / chunks;
        auto comb = unrank_combination(begin, m.n_rows, m.n_cols);
        Integer g = 0;
        for (std::uint64_t idx = begin; idx < end && !unit.load(std::memory_order_relaxed); ++idx) {
            Integer det = determinant_of_rows(m, comb);
            if (det != 0) {
                mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), det.get_mpz_t());
                // gcd 1 is final; further minors cannot change it.
                if (g == 1) unit.store(true, std::memory_order_relaxed);
            }
            next_combination(comb, m.n_rows);
        }
        partial[chunk] = g;
    }
    if (unit.load()) return 1;
    Integer g = 0;
    for (const auto& v : partial) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    return g;
}

Integer minor_gcd_modular(const SparseIntMatrix& m, const Integer& multiple) {
    if (multiple == 0) throw std::invalid_argument("minor_gcd_modular: multiple must be nonzero");
    if (m.n_rows < m.n_cols) throw std::invalid_argument("minor_gcd_modular: fewer rows than columns");
    const std::size_t n_cols = m.n_cols;
    mpz_class modulus = abs(multiple);
    mpz_class index = 1;

    std::vector<std::vector<mpz_class>> a;
    a.reserve(m.n_rows);
    for (const auto& sparse : m.rows) {
        std::vector<mpz_class> row(n_cols, 0);
        bool any = false;
        for (const auto& [c, v] : sparse) {
            mpz_fdiv_r(row[c].get_mpz_t(), v.get_mpz_t(), modulus.get_mpz_t());
            any = any || sgn(row[c]) != 0;
        }
        if (any) a.push_back(std::move(row));
    }

    mpz_class g, s, t, u, v, x, y;
    auto reduce = [&](mpz_class& e) { mpz_fdiv_r(e.get_mpz_t(), e.get_mpz_t(), modulus.get_mpz_t()); };

    // The row lattice L contains modulus * Z^n_cols, so entries may be reduced
    // freely. Each column contributes gcd(pivot, modulus) to the index, after
    // which the remaining lattice contains (modulus / that gcd) * Z^rest.
    for (std::size_t k = 0; k < n_cols && modulus != 1; ++k) {
        std::size_t pivot = kNone;
        for (std::size_t r = 0; r < a.size(); ++r) {
            if (sgn(a[r][k]) == 0) continue;
            if (pivot == kNone) {
                pivot = r;
                continue;
            }
            auto& prow = a[pivot];
            auto& row = a[r];
            if (mpz_divisible_p(row[k].get_mpz_t(), prow[k].get_mpz_t())) {
                mpz_divexact(u.get_mpz_t(), row[k].get_mpz_t(), prow[k].get_mpz_t());
                for (std::size_t c = k; c < n_cols; ++c) {
                    if (sgn(prow[c]) == 0) continue;
                    mpz_submul(row[c].get_mpz_t(), u.get_mpz_t(), prow[c].get_mpz_t());
                    reduce(row[c]);
                }
                continue;
            }
            // Unimodular 2x2 step [s t; -v u] with s*x + t*y = g.
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), prow[k].get_mpz_t(), row[k].get_mpz_t());
            mpz_divexact(u.get_mpz_t(), prow[k].get_mpz_t(), g.get_mpz_t());
            mpz_divexact(v.get_mpz_t(), row[k].get_mpz_t(), g.get_mpz_t());
            for (std::size_t c = k; c < n_cols; ++c) {
                x = s * prow[c] + t * row[c];
                y = u * row[c] - v * prow[c];
                reduce(x);
                reduce(y);
                mpz_swap(prow[c].get_mpz_t(), x.get_mpz_t());
                mpz_swap(row[c].get_mpz_t(), y.get_mpz_t());
            }
        }

        mpz_class lead = pivot == kNone ? mpz_class(0) : a[pivot][k];
        mpz_gcd(g.get_mpz_t(), lead.get_mpz_t(), modulus.get_mpz_t());
        index *= g;
        mpz_divexact(modulus.get_mpz_t(), modulus.get_mpz_t(), g.get_mpz_t());
        if (pivot != kNone) a.erase(a.begin() + static_cast<std::ptrdiff_t>(pivot));

        std::erase_if(a, [&](std::vector<mpz_class>& row) {
            bool any = false;
            for (std::size_t c = k + 1; c < n_cols; ++c) {
                reduce(row[c]);
                any = any || sgn(row[c]) != 0;
            }
            return !any;
        });
    }
    return index;
}

}  // namespace caprimes
