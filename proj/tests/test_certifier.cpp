#include <doctest.h>

#include <filesystem>
#include <random>
#include <set>

#include <unistd.h>

#include "caprimes/certifier.hpp"
#include "caprimes/oracle.hpp"
#include "caprimes/reference.hpp"

using namespace caprimes;
namespace fs = std::filesystem;

namespace {

std::set<Integer> as_set(const std::vector<Integer>& v) { return {v.begin(), v.end()}; }

fs::path fresh_dir(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("caprimes_test_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    return dir;
}

RunOptions options(int jobs = 1, bool symmetry = true) {
    RunOptions o;
    o.jobs = jobs;
    o.symmetry = symmetry;
    return o;
}

}  // namespace

TEST_CASE("certify_tuple examples") {
    GTable g3(3);
    CertifyConfig cfg;
    auto c13 = certify_tuple(3, Tuple({1, 3}), g3, cfg);
    CHECK(c13.status == CertStatus::complete);
    CHECK(c13.rank_q == 3);
    CHECK(c13.minor_gcd == 2);
    CHECK(c13.bad_primes == std::vector<Integer>{2});
    auto c33 = certify_tuple(3, Tuple({3, 3}), g3, cfg);
    CHECK(c33.status == CertStatus::complete);
    CHECK(c33.minor_gcd == 1);
    CHECK(c33.bad_primes.empty());

    GTable g4(4);
    auto c123 = certify_tuple(4, Tuple({1, 2, 3}), g4, cfg);
    CHECK(c123.rank_q == 15);
    CHECK(c123.status == CertStatus::complete);
    CHECK(c123.minor_gcd == minor_gcd_exhaustive(build_matrix(4, Tuple({1, 2, 3}), g4).matrix, 10'000));
}

TEST_CASE("candidates record rank mod p and the verdict") {
    GTable g4(4);
    for (const auto& o : canonical_tuples(4)) {
        auto cert = certify_tuple(4, o.representative, g4, {}, o.size);
        CHECK(cert.orbit_size == o.size);
        auto m = build_matrix(4, o.representative, g4).matrix;
        std::set<Integer> bad;
        for (const auto& c : cert.candidates) {
            CHECK(c.bad == (c.rank_mod_p < 15));
            CHECK(c.rank_mod_p == reference::rank_mod_p(m, c.prime.get_ui()));
            if (c.bad) bad.insert(c.prime);
        }
        CHECK(bad == as_set(cert.bad_primes));
    }
}

TEST_CASE("identity tuple has minor gcd 1 for n <= 5") {
    for (int n = 2; n <= 5; ++n) {
        GTable g(n);
        std::vector<int> id(static_cast<std::size_t>(n - 1), n);
        auto cert = certify_tuple(n, Tuple(id), g, {});
        CHECK(cert.status == CertStatus::complete);
        CHECK(cert.minor_gcd == 1);
        CHECK(cert.bad_primes.empty());
        if (n <= 4) CHECK(minor_gcd_exhaustive(build_matrix(n, Tuple(id), g).matrix, 10'000) == 1);
    }
}

TEST_CASE("sampled-minor path without refinement still finds the n = 4 primes") {
    CertifyConfig cfg;
    cfg.exhaustive_limit = 1;  // force the candidate-prime path
    cfg.exact_gcd = false;
    RunOptions o = options();
    o.certify = cfg;
    auto rep = bad_primes(4, o);
    CHECK(rep.complete);
    CHECK(rep.bad_primes == std::vector<Integer>{3, 5, 7});
    o.certify.exact_gcd = true;
    auto exact = bad_primes(4, o);
    CHECK(exact.bad_primes == rep.bad_primes);
    for (const auto& c : exact.certificates)
        CHECK(c.minor_gcd == minor_gcd_exhaustive(build_matrix(4, c.tuple, GTable(4)).matrix, 10'000));
}

TEST_CASE("degree runs for n <= 4 match the serial exhaustive reference") {
    CHECK(bad_primes(2, options()).bad_primes.empty());
    CHECK(bad_primes(3, options()).bad_primes == std::vector<Integer>{2});
    for (int n = 2; n <= 4; ++n) {
        auto with = bad_primes(n, options(1, true));
        auto without = bad_primes(n, options(2, false));
        auto ref = reference::bad_primes(n, {});
        CHECK(with.bad_primes == without.bad_primes);
        CHECK(with.bad_primes == ref.bad_primes);
        CHECK(with.complete);
        CHECK(without.complete);
        CHECK(with.tuples_processed == with.tuples_total);
        CHECK(without.certificates.size() == without.tuples_total);
        CHECK(with.outcome() == DegreeReport::Outcome::complete);

        // Exhaustive minor gcd over every tuple as an independent oracle.
        GTable g(n);
        std::set<Integer> oracle;
        for (const auto& o : all_tuples(n)) {
            const Integer j = minor_gcd_exhaustive(build_matrix(n, o.representative, g).matrix, 10'000);
            for (const auto& [p, e] : factorize(j).factors) oracle.insert(p);
        }
        CHECK(as_set(with.bad_primes) == oracle);
    }
}

TEST_CASE("witnesses re-verify on freshly built matrices") {
    for (int n = 3; n <= 4; ++n) {
        auto rep = bad_primes(n, options());
        REQUIRE(rep.witnesses.size() == rep.bad_primes.size());
        const std::size_t C = degree_data(n).columns();
        for (std::size_t k = 0; k < rep.witnesses.size(); ++k) {
            CHECK(rep.witnesses[k].prime == rep.bad_primes[k]);
            GTable fresh(n);
            auto m = build_matrix(n, rep.witnesses[k].tuple, fresh).matrix;
            CHECK(reference::rank_mod_p(m, rep.bad_primes[k].get_ui()) < C);
        }
    }
}

TEST_CASE("aggregation is the union of certificate prime sets") {
    auto rep = bad_primes(4, options());
    std::set<Integer> uni;
    for (const auto& c : rep.certificates) uni.insert(c.bad_primes.begin(), c.bad_primes.end());
    CHECK(uni == as_set(rep.bad_primes));

    // Fabricated certificates: aggregation keeps the first tuple per prime.
    TupleCertificate a, b;
    a.degree = b.degree = 4;
    a.tuple = Tuple({4, 4, 1});
    b.tuple = Tuple({1, 1, 2});
    a.bad_primes = {5};
    b.bad_primes = {3, 5};
    b.status = CertStatus::incomplete;
    b.unresolved_cofactor = Integer("1000000000000000003000000000000000002");
    auto agg = aggregate(4, true, {a, b}, 2, false);
    CHECK(agg.bad_primes == std::vector<Integer>{3, 5});
    CHECK(agg.witnesses[1].tuple == Tuple({4, 4, 1}));
    CHECK_FALSE(agg.complete);
    CHECK(agg.outcome() == DegreeReport::Outcome::incomplete);

    TupleCertificate deg;
    deg.degree = 4;
    deg.tuple = Tuple({1, 2, 3});
    deg.status = CertStatus::degenerate;
    auto agg2 = aggregate(4, true, {a, deg}, 2, false);
    CHECK(agg2.degenerate_tuples == std::vector<Tuple>{Tuple({1, 2, 3})});
    CHECK(agg2.outcome() == DegreeReport::Outcome::degenerate);
}

TEST_CASE("cross-oracle: every bad prime for n = 3, 4 has a counterexample over F_p") {
    for (int n = 3; n <= 4; ++n) {
        auto rep = bad_primes(n, options());
        for (const auto& p : rep.bad_primes) {
            auto res = search_counterexamples(n, static_cast<std::uint32_t>(p.get_ui()));
            CHECK_MESSAGE(!res.witnesses.empty(), "n=" << n << " p=" << p.get_str());
        }
    }
}

TEST_CASE("report determinism across job counts") {
    for (int n = 3; n <= 4; ++n) {
        const auto one = to_json(bad_primes(n, options(1))).dump();
        const auto four = to_json(bad_primes(n, options(4))).dump();
        CHECK(one == four);
    }
}

TEST_CASE("certificate JSON round trip and field names") {
    GTable g4(4);
    for (const auto& o : canonical_tuples(4)) {
        auto cert = certify_tuple(4, o.representative, g4, {}, o.size);
        auto j = to_json(cert);
        std::vector<std::string> keys;
        for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
        CHECK(keys == std::vector<std::string>{"degree", "tuple", "orbit_size", "d", "C", "D", "rank_q", "minor_gcd",
                                               "candidates", "bad_primes", "unresolved_cofactor", "status",
                                               "matrix_hash"});
        auto back = certificate_from_json(nlohmann::json::parse(j.dump()));
        CHECK(back == cert);
    }
    CHECK(integer_from_json(integer_to_json(Integer("123456789012345678901234567890"))) ==
          Integer("123456789012345678901234567890"));
    CHECK(integer_to_json(Integer(42)) == 42);
    CHECK(cert_status_from_string(to_string(CertStatus::degenerate)) == CertStatus::degenerate);
    CHECK_THROWS_AS(cert_status_from_string("bogus"), std::invalid_argument);
}

TEST_CASE("report JSON omits timing unless asked") {
    auto rep = bad_primes(3, options());
    auto plain = to_json(rep);
    CHECK(plain["bad_primes"] == nlohmann::json::array({2}));
    CHECK_FALSE(plain.contains("stats"));
    CHECK(to_json(rep, true).contains("stats"));
}

TEST_CASE("cache: a resumed run reproduces the uninterrupted report") {
    const auto dir = fresh_dir("resume");
    RunOptions cached = options(2);
    cached.cache_dir = dir;

    auto baseline = bad_primes(4, options());

    // Interrupted run: stop flag raised before any tuple starts.
    std::atomic<bool> stop{true};
    cached.stop = &stop;
    auto halted = bad_primes(4, cached);
    CHECK(halted.interrupted);
    CHECK_FALSE(halted.complete);
    CHECK(halted.outcome() == DegreeReport::Outcome::incomplete);

    // Partial cache: store half the certificates by hand.
    CertificateCache cache(dir);
    for (std::size_t k = 0; k < baseline.certificates.size(); k += 2) cache.store(baseline.certificates[k], {});
    CHECK(cache.list().size() == (baseline.certificates.size() + 1) / 2);

    cached.stop = nullptr;
    auto resumed = bad_primes(4, cached);
    CHECK(resumed.stats.cache_hits == (baseline.certificates.size() + 1) / 2);
    CHECK(to_json(resumed).dump() == to_json(baseline).dump());

    auto again = bad_primes(4, cached);
    CHECK(again.stats.computed == 0);
    CHECK(to_json(again).dump() == to_json(baseline).dump());

    // A different configuration does not reuse these entries.
    RunOptions other = cached;
    other.certify.seed = 99;
    CHECK(bad_primes(4, other).stats.cache_hits == 0);

    fs::remove_all(dir);
}

TEST_CASE("cache clear removes every entry") {
    const auto dir = fresh_dir("clear");
    RunOptions cached = options();
    cached.cache_dir = dir;
    bad_primes(3, cached);
    CertificateCache cache(dir);
    const auto stored = cache.list().size();
    CHECK(stored == canonical_tuples(3).size());
    CHECK(cache.clear() == stored);
    CHECK(cache.list().empty());
    fs::remove_all(dir);
}
