#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "caprimes/exactlinalg.hpp"
#include "caprimes/macaulay.hpp"

using namespace caprimes;

namespace {

std::vector<std::vector<Integer>> dense_of(std::initializer_list<std::initializer_list<long>> rows) {
    std::vector<std::vector<Integer>> out;
    for (const auto& r : rows) {
        std::vector<Integer> row;
        for (long v : r) row.emplace_back(v);
        out.push_back(std::move(row));
    }
    return out;
}

// Direct evaluation of the size formulas with plain loops.
long choose(long m, long k) {
    if (k < 0 || k > m) return 0;
    long r = 1;
    for (long t = 1; t <= k; ++t) r = r * (m - k + t) / t;
    return r;
}

std::vector<Tuple> every_tuple(int n) {
    std::vector<Tuple> out;
    std::vector<int> e(static_cast<std::size_t>(n - 1), 1);
    while (true) {
        out.emplace_back(e);
        std::size_t k = 0;
        while (k < e.size() && e[k] == n) e[k++] = 1;
        if (k == e.size()) break;
        ++e[k];
    }
    return out;
}

/// Relabeling orbit key computed independently: the set of all images under
/// permutations of {1..n-1}, as its minimum.
Tuple orbit_min(const Tuple& t, int n) {
    std::vector<int> perm(static_cast<std::size_t>(n - 1));
    for (int k = 0; k < n - 1; ++k) perm[static_cast<std::size_t>(k)] = k + 1;
    Tuple best = t;
    do {
        std::vector<int> img;
        for (int v : t.entries()) img.push_back(v == n ? n : perm[static_cast<std::size_t>(v - 1)]);
        best = std::min(best, Tuple(img));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

std::multiset<std::vector<std::uint32_t>> support_multiset(const SparseIntMatrix& m) {
    // Supports described by the column counts per row, sorted; invariant
    // under row and column permutations together with the value multiset.
    std::multiset<std::vector<std::uint32_t>> out;
    for (const auto& row : m.rows) {
        std::vector<std::uint32_t> vals;
        for (const auto& [c, v] : row) vals.push_back(static_cast<std::uint32_t>(mpz_get_si(v.get_mpz_t()) + 1000));
        std::sort(vals.begin(), vals.end());
        out.insert(vals);
    }
    return out;
}

}  // namespace

TEST_CASE("degree_data examples") {
    auto d3 = degree_data(3);
    CHECK(d3.d == 2);
    CHECK(d3.C == 3);
    CHECK(d3.D == 3);
    auto d4 = degree_data(4);
    CHECK(d4.d == 4);
    CHECK(d4.C == 15);
    CHECK(d4.D == 19);
    auto d5 = degree_data(5);
    CHECK(d5.d == 7);
    CHECK(d5.C == 120);
    CHECK(d5.D == 195);
    CHECK_THROWS_AS(degree_data(1), std::invalid_argument);
}

TEST_CASE("degree_data matches the formulas for 2 <= n <= 10") {
    for (long n = 2; n <= 10; ++n) {
        const long d = (n * n - 3 * n + 4) / 2;
        const long C = choose((n * n - n) / 2, n - 2);
        long D = 0;
        for (long i = 1; i <= n - 1; ++i) D += choose(d - i + n - 2, n - 2);
        const auto dd = degree_data(static_cast<int>(n));
        CHECK(dd.d == d);
        CHECK(dd.C == C);
        CHECK(dd.D == D);
        CHECK(dd.D >= dd.C);
        if (n > 3) CHECK(dd.D > dd.C);
        if (n == 3) CHECK(dd.D == dd.C);
        // C counts the degree-d monomials in n-1 variables.
        if (n <= 7) CHECK(Integer(static_cast<unsigned long>(enumerate_monomials(static_cast<std::size_t>(n - 1), static_cast<std::uint32_t>(d)).size())) == dd.C);
    }
}

TEST_CASE("enumerate_monomials examples") {
    auto m = enumerate_monomials(2, 2);
    REQUIRE(m.size() == 3);
    CHECK(m[0] == ExponentVector{2, 0});
    CHECK(m[1] == ExponentVector{1, 1});
    CHECK(m[2] == ExponentVector{0, 2});
    auto z = enumerate_monomials(4, 0);
    REQUIRE(z.size() == 1);
    CHECK(z[0] == ExponentVector(4));
    auto big = enumerate_monomials(3, 7);
    CHECK(big.size() == 36);
    std::set<std::vector<std::uint32_t>> distinct;
    GrevlexGreater gt;
    for (std::size_t k = 0; k < big.size(); ++k) {
        CHECK(big[k].total_degree() == 7);
        distinct.insert(big[k].values());
        if (k) CHECK(gt(big[k - 1], big[k]));
    }
    CHECK(distinct.size() == 36);
}

TEST_CASE("tuple parsing and validation") {
    CHECK(Tuple::parse("1,3", 3).entries() == std::vector<int>{1, 3});
    CHECK(Tuple::parse("4,4,4", 4).entries() == std::vector<int>{4, 4, 4});
    CHECK_THROWS_AS(Tuple::parse("1,9", 3), std::invalid_argument);
    CHECK_THROWS_AS(Tuple::parse("1", 3), std::invalid_argument);
    CHECK_THROWS_AS(Tuple::parse("1,2,3", 3), std::invalid_argument);
    CHECK_THROWS_AS(Tuple::parse("1,x", 3), std::invalid_argument);
    CHECK_THROWS_AS(Tuple::parse("0,1", 3), std::invalid_argument);
    CHECK(Tuple({1, 2, 4}).to_string() == "1,2,4");
}

TEST_CASE("build_matrix n=3 examples") {
    GTable g(3);
    auto m33 = build_matrix(3, Tuple({3, 3}), g);
    CHECK(m33.matrix.dense() == dense_of({{1, 1, 0}, {0, 1, 1}, {0, 1, 0}}));
    auto m13 = build_matrix(3, Tuple({1, 3}), g);
    CHECK(m13.matrix.dense() == dense_of({{-2, 1, 0}, {0, -2, 1}, {0, 1, 0}}));
    REQUIRE(m13.row_labels.size() == 3);
    CHECK(m13.row_labels[0].i == 1);
    CHECK(m13.row_labels[0].alpha == ExponentVector{1, 0});
    CHECK(m13.row_labels[2].i == 2);
    CHECK_THROWS_AS(build_matrix(3, Tuple({1, 4}), g), std::invalid_argument);
    CHECK_THROWS_AS(build_matrix(4, Tuple({1, 1, 1}), g), std::invalid_argument);
}

TEST_CASE("build_matrix shape, sparsity and determinism for n <= 5") {
    for (int n = 2; n <= 5; ++n) {
        GTable g(n);
        const auto dd = degree_data(n);
        std::mt19937_64 rng(static_cast<std::uint64_t>(n));
        auto tuples = every_tuple(n);
        std::shuffle(tuples.begin(), tuples.end(), rng);
        tuples.resize(std::min<std::size_t>(tuples.size(), 12));
        for (const auto& t : tuples) {
            auto m = build_matrix(n, t, g);
            CHECK(m.matrix.n_rows == dd.rows());
            CHECK(m.matrix.n_cols == dd.columns());
            for (std::size_t r = 0; r < m.matrix.n_rows; ++r) {
                const int i = m.row_labels[r].i;
                const auto& gi = g.at(t[static_cast<std::size_t>(i - 1)], i);
                CHECK(m.matrix.rows[r].size() == gi.term_count());
                CHECK(Integer(static_cast<unsigned long>(m.matrix.rows[r].size())) <= binomial(i + n - 2, n - 2));
                for (const auto& [c, v] : m.matrix.rows[r]) CHECK(abs(v) <= binomial(i + n - 2, n - 2));
            }
            auto again = build_matrix(n, t, g);
            CHECK(again.matrix == m.matrix);
            CHECK(again.content_hash() == m.content_hash());
        }
    }
}

TEST_CASE("triplet export format") {
    GTable g(3);
    auto m = build_matrix(3, Tuple({1, 3}), g);
    const std::string expected =
        "3 3 3 1,3\n"
        "1 1 -2\n1 2 1\n"
        "2 2 -2\n2 3 1\n"
        "3 2 1\n";
    CHECK(m.export_triplets() == expected);
    CHECK(m.content_hash().size() == 64);
    CHECK(m.content_hash() != build_matrix(3, Tuple({3, 3}), g).content_hash());
}

TEST_CASE("canonical tuple orbits") {
    auto orbits3 = canonical_tuples(3);
    std::vector<Tuple> reps;
    for (const auto& o : orbits3) reps.push_back(o.representative);
    CHECK(reps == std::vector<Tuple>{Tuple({3, 3}), Tuple({1, 3}), Tuple({3, 1}), Tuple({1, 1}), Tuple({1, 2})});
    for (int n = 2; n <= 6; ++n) {
        auto orbits = canonical_tuples(n);
        std::uint64_t total = 0;
        for (const auto& o : orbits) total += o.size;
        std::uint64_t expect = 1;
        for (int k = 0; k < n - 1; ++k) expect *= static_cast<std::uint64_t>(n);
        CHECK(total == expect);
        // Independent grouping by the orbit minimum.
        std::map<Tuple, std::uint64_t> groups;
        for (const auto& t : every_tuple(n)) ++groups[orbit_min(t, n)];
        CHECK(groups.size() == orbits.size());
        for (const auto& o : orbits) {
            CHECK(canonicalize(o.representative, n) == o.representative);
            CHECK(groups[orbit_min(o.representative, n)] == o.size);
        }
        auto full = all_tuples(n);
        CHECK(full.size() == expect);
        for (const auto& o : full) CHECK(o.size == 1);
    }
    const std::vector<std::size_t> bell{2, 5, 15, 52, 203};
    for (int n = 2; n <= 6; ++n) CHECK(canonical_tuples(n).size() == bell[static_cast<std::size_t>(n - 2)]);
    // The identity tuple is its own orbit.
    CHECK(canonical_tuples(5).front().representative == Tuple({5, 5, 5, 5}));
    CHECK(canonical_tuples(5).front().size == 1);
}

TEST_CASE("scheduling order: entries different from n, then lexicographic") {
    for (int n = 3; n <= 5; ++n) {
        auto orbits = canonical_tuples(n);
        auto key = [n](const Tuple& t) {
            return std::make_pair(std::count_if(t.entries().begin(), t.entries().end(), [n](int v) { return v != n; }),
                                  t);
        };
        for (std::size_t k = 1; k < orbits.size(); ++k)
            CHECK(key(orbits[k - 1].representative) < key(orbits[k].representative));
    }
}

TEST_CASE("property: relabeling orbits share supports and minor gcd for n = 3, 4") {
    for (int n = 3; n <= 4; ++n) {
        GTable g(n);
        std::map<Tuple, std::pair<std::multiset<std::vector<std::uint32_t>>, Integer>> seen;
        std::size_t checked = 0;
        for (const auto& t : every_tuple(n)) {
            auto m = build_matrix(n, t, g);
            auto supports = support_multiset(m.matrix);
            Integer j = minor_gcd_exhaustive(m.matrix, 10'000);
            const Tuple key = canonicalize(t, n);
            auto it = seen.find(key);
            if (it == seen.end()) {
                seen.emplace(key, std::make_pair(supports, j));
            } else {
                CHECK(it->second.first == supports);
                CHECK(it->second.second == j);
                ++checked;
            }
        }
        CHECK(checked > 0);
    }
}
