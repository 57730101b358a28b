#include <doctest.h>

#include <random>

#include "caprimes/exactlinalg.hpp"
#include "caprimes/reference.hpp"
#include "test_support.hpp"

using namespace caprimes;
using caprimes::testing::random_matrix;
using caprimes::testing::small_primes;

namespace {

std::vector<Tuple> every_tuple(int n) {
    std::vector<Tuple> out;
    for (const auto& o : all_tuples(n)) out.push_back(o.representative);
    return out;
}

std::uint64_t random_prime_30(std::mt19937_64& rng) {
    while (true) {
        Integer c = static_cast<unsigned long>((rng() & ((1u << 30) - 1)) | (1u << 29) | 1u);
        if (mpz_probab_prime_p(c.get_mpz_t(), 30)) return c.get_ui();
    }
}

}  // namespace

TEST_CASE("rank examples") {
    GTable g3(3);
    auto m13 = build_matrix(3, Tuple({1, 3}), g3).matrix;
    auto m33 = build_matrix(3, Tuple({3, 3}), g3).matrix;
    CHECK(rank_mod_p(m13, 2) == 2);
    CHECK(rank_mod_p(m13, 3) == 3);
    for (std::uint64_t p : small_primes(60)) CHECK(rank_mod_p(m33, p) == 3);
    CHECK(rank_over_rationals(m13) == 3);
    CHECK(rank_over_rationals(SparseIntMatrix(4, 3)) == 0);
    CHECK(rank_mod_p(SparseIntMatrix(4, 3), 7) == 0);
    CHECK_THROWS_AS(rank_mod_p(m13, 4), std::invalid_argument);
    CHECK_THROWS_AS(rank_mod_p(m13, 1), std::invalid_argument);
    CHECK(rank_mod_prime(m13, Integer(2)) == 2);
    Integer huge;
    mpz_nextprime(huge.get_mpz_t(), Integer("340282366920938463463374607431768211456").get_mpz_t());
    CHECK(rank_mod_prime(m13, huge) == 3);

    auto dup = m33;
    dup.rows.push_back(dup.rows[1]);
    ++dup.n_rows;
    CHECK(rank_over_rationals(dup) == rank_over_rationals(m33));

    GTable g4(4);
    for (const auto& t : every_tuple(4)) CHECK(rank_over_rationals(build_matrix(4, t, g4).matrix) == 15);
}

TEST_CASE("large prime path agrees with the small prime path") {
    GTable g4(4);
    auto m = build_matrix(4, Tuple({1, 2, 3}), g4).matrix;
    const std::uint64_t big = 2305843009213693951ULL;  // 2^61 - 1
    CHECK(rank_mod_p(m, big) == reference::rank_mod_p(m, big));
    CHECK(rank_mod_p(m, big, Exec::parallel) == 15);
}

TEST_CASE("maximal minor examples") {
    GTable g3(3);
    auto c13 = nonzero_maximal_minor(build_matrix(3, Tuple({1, 3}), g3).matrix);
    CHECK(abs(c13.value) == 2);
    auto c33 = nonzero_maximal_minor(build_matrix(3, Tuple({3, 3}), g3).matrix);
    CHECK(abs(c33.value) == 1);
    std::vector<std::vector<Integer>> deficient{{1, 2}, {2, 4}, {3, 6}};
    CHECK(nonzero_maximal_minor(SparseIntMatrix::from_dense(deficient)).is_zero());
}

TEST_CASE("exhaustive minor gcd examples") {
    GTable g3(3), g4(4);
    CHECK(minor_gcd_exhaustive(build_matrix(3, Tuple({1, 3}), g3).matrix, 10) == 2);
    CHECK(minor_gcd_exhaustive(build_matrix(3, Tuple({1, 1}), g3).matrix, 10) == 1);
    auto m444 = build_matrix(4, Tuple({4, 4, 4}), g4).matrix;
    CHECK(binomial(19, 15) == 3876);
    CHECK(minor_gcd_exhaustive(m444, 10'000) == 1);
    CHECK(reference::minor_gcd_exhaustive(m444) == 1);
    CHECK_THROWS_AS(minor_gcd_exhaustive(m444, 3875), MinorLimitExceeded);
    try {
        minor_gcd_exhaustive(m444, 100);
    } catch (const MinorLimitExceeded& e) {
        CHECK(e.required() == 3876);
        CHECK(e.limit() == 100);
    }
    std::vector<std::vector<Integer>> deficient{{1, 2}, {2, 4}, {3, 6}};
    CHECK(minor_gcd_exhaustive(SparseIntMatrix::from_dense(deficient), 10) == 0);
}

TEST_CASE("property: minor consistency and rank agreement on random matrices") {
    std::mt19937_64 rng(2024);
    int cases = 0;
    for (int rep = 0; rep < 300; ++rep) {
        const std::size_t cols = 1 + rng() % 5;
        const std::size_t rows = cols + rng() % 4;
        auto m = random_matrix(rng, rows, cols);
        const std::size_t rq = rank_over_rationals(m);
        CHECK(rq == reference::rank_rational(m));
        PivotStrategy strat;
        if (rep % 2) strat = {PivotStrategy::Kind::random, rng()};
        auto cert = nonzero_maximal_minor(m, strat);
        CHECK(cert.is_zero() == (rq < cols));
        if (!cert.is_zero()) {
            CHECK(determinant_of_rows(m, cert.pivot_rows) == cert.value);
            CHECK(reference::determinant_rational(m, cert.pivot_rows) == cert.value);
            std::uint64_t p;
            do {
                p = random_prime_30(rng);
            } while (mpz_divisible_ui_p(cert.value.get_mpz_t(), p));
            CHECK(rank_mod_p(m, p) == rq);
        }
        // Any prime: the fast kernels match the textbook elimination.
        const std::uint64_t q = small_primes(50)[rng() % 15];
        CHECK(rank_mod_p(m, q, Exec::serial) == reference::rank_mod_p(m, q));
        CHECK(rank_mod_p(m, q, Exec::parallel) == reference::rank_mod_p(m, q));
        if (rows <= 8) {
            const Integer j = minor_gcd_exhaustive(m, 1000);
            CHECK(j == reference::minor_gcd_exhaustive(m));
            if (!cert.is_zero()) CHECK(minor_gcd_modular(m, cert.value) == j);
        }
        ++cases;
    }
    CHECK(cases >= 200);
}

TEST_CASE("property: J_T divides every maximal minor, n <= 4") {
    for (int n = 2; n <= 4; ++n) {
        GTable g(n);
        for (const auto& t : every_tuple(n)) {
            auto m = build_matrix(n, t, g).matrix;
            const Integer j = minor_gcd_exhaustive(m, 10'000);
            REQUIRE(j != 0);
            for (int s = 0; s < 3; ++s) {
                PivotStrategy strat{s == 0 ? PivotStrategy::Kind::markowitz : PivotStrategy::Kind::random,
                                    static_cast<std::uint64_t>(s)};
                auto cert = nonzero_maximal_minor(m, strat);
                REQUIRE_FALSE(cert.is_zero());
                CHECK(cert.value % j == 0);
                CHECK(minor_gcd_modular(m, cert.value) == j);
            }
        }
    }
}

TEST_CASE("property: p | J_T iff rank mod p < C, n <= 4, p <= 50") {
    const auto primes = small_primes(50);
    std::size_t checked = 0;
    for (int n = 2; n <= 4; ++n) {
        GTable g(n);
        const std::size_t C = degree_data(n).columns();
        for (const auto& t : every_tuple(n)) {
            auto m = build_matrix(n, t, g).matrix;
            const Integer j = minor_gcd_exhaustive(m, 10'000);
            for (std::uint64_t p : primes) {
                const bool divides = mpz_divisible_ui_p(j.get_mpz_t(), p) != 0;
                CHECK(divides == (rank_mod_p(m, p) < C));
                ++checked;
            }
        }
    }
    CHECK(checked == (2 + 9 + 64) * 15);
}

TEST_CASE("Bareiss pivot bookkeeping") {
    GTable g4(4);
    auto m = build_matrix(4, Tuple({1, 1, 2}), g4).matrix;
    for (int s = 0; s < 4; ++s) {
        PivotStrategy strat{s ? PivotStrategy::Kind::random : PivotStrategy::Kind::markowitz,
                            static_cast<std::uint64_t>(s * 17)};
        auto serial = bareiss_eliminate(m, strat, Exec::serial);
        auto parallel = bareiss_eliminate(m, strat, Exec::parallel);
        CHECK(serial.rank == 15);
        CHECK(serial.pivot_rows == parallel.pivot_rows);
        CHECK(serial.last_pivot == parallel.last_pivot);
        CHECK(abs(determinant_of_rows(m, serial.pivot_rows)) == abs(serial.last_pivot));
    }
}

TEST_CASE("factorize examples") {
    auto f2 = factorize(2);
    REQUIRE(f2.factors.size() == 1);
    CHECK(f2.factors[0] == std::make_pair(Integer(2), 1u));
    CHECK(f2.cofactor == 1);
    auto f72 = factorize(72);
    CHECK(f72.factors == std::vector<std::pair<Integer, unsigned>>{{2, 3}, {3, 2}});
    CHECK(f72.cofactor == 1);
    auto f1 = factorize(1);
    CHECK(f1.factors.empty());
    CHECK(f1.cofactor == 1);
    CHECK_THROWS_AS(factorize(-12), std::invalid_argument);
    CHECK_THROWS_AS(factorize(0), std::invalid_argument);
}

TEST_CASE("factorize beyond trial division") {
    const Integer p("1000003"), q("998244353"), r("1000000007");
    auto res = factorize(p * q * q * r);
    CHECK(res.cofactor == 1);
    CHECK(res.factors == std::vector<std::pair<Integer, unsigned>>{{p, 1}, {q, 2}, {r, 1}});
    const Integer big_prime("170141183460469231731687303715884105727");  // 2^127 - 1
    auto prime_only = factorize(big_prime * 6);
    CHECK(prime_only.cofactor == 1);
    CHECK(prime_only.factors.back() == std::make_pair(big_prime, 1u));
    // Perfect power of a prime past the trial bound.
    auto pw = factorize(r * r * r);
    CHECK(pw.factors == std::vector<std::pair<Integer, unsigned>>{{r, 3}});
}

TEST_CASE("factorize leaves a cofactor when the budget runs out") {
    const Integer a("1000000000000000003"), b("1000000000000000009");
    FactorBudget tight{1000, 10};
    auto res = factorize(a * b * 12, tight);
    CHECK(res.cofactor == a * b);
    CHECK(res.factors == std::vector<std::pair<Integer, unsigned>>{{2, 2}, {3, 1}});
}

TEST_CASE("property: factorization reproduces its input") {
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 200; ++rep) {
        Integer n = 1;
        const int parts = 1 + static_cast<int>(rng() % 5);
        for (int k = 0; k < parts; ++k) n *= static_cast<unsigned long>(1 + rng() % 5'000'000);
        FactorBudget budget{1 + rng() % 2000, 100'000};
        auto res = factorize(n, budget);
        Integer prod = res.cofactor;
        for (const auto& [pr, e] : res.factors) {
            CHECK(is_probable_prime(pr));
            Integer pw;
            mpz_pow_ui(pw.get_mpz_t(), pr.get_mpz_t(), e);
            prod *= pw;
        }
        CHECK(prod == n);
        for (std::uint64_t small = 2; small < budget.trial_bound && small < 50; ++small)
            if (is_probable_prime(Integer(static_cast<unsigned long>(small))))
                CHECK_FALSE(mpz_divisible_ui_p(res.cofactor.get_mpz_t(), small));
    }
}
