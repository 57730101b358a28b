#include "caprimes/certifier.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include <omp.h>

namespace caprimes {

std::string CertifyConfig::fingerprint() const {
    std::ostringstream s;
    s << "x" << exhaustive_limit << "-t" << factor_budget.trial_bound << "-r" << factor_budget.pollard_iterations << "-m"
      << minors << "-s" << seed << "-e" << exact_gcd << "-c" << cross_check;
    return s.str();
}

std::string to_string(CertStatus s) {
    switch (s) {
        case CertStatus::complete: return "complete";
        case CertStatus::incomplete: return "incomplete";
        case CertStatus::degenerate: return "degenerate";
    }
    return "unknown";
}

CertStatus cert_status_from_string(const std::string& s) {
    if (s == "complete") return CertStatus::complete;
    if (s == "incomplete") return CertStatus::incomplete;
    if (s == "degenerate") return CertStatus::degenerate;
    throw std::invalid_argument("unknown certificate status '" + s + "'");
}

bool operator==(const TupleCertificate& a, const TupleCertificate& b) {
    auto key = [](const TupleCertificate& c) { return to_json(c).dump(); };
    return key(a) == key(b);
}

namespace {

std::uint64_t tuple_seed(std::uint64_t seed, const Tuple& t, int strategy) {
    // splitmix64 over the inputs; keeps pivot choices independent of scheduling.
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    std::uint64_t h = mix(seed ^ static_cast<std::uint64_t>(strategy));
    for (int j : t.entries()) h = mix(h ^ static_cast<std::uint64_t>(j));
    return h;
}

std::uint64_t random_prime(std::mt19937_64& rng) {
    std::uniform_int_distribution<std::uint64_t> dist(std::uint64_t{1} << 60, (std::uint64_t{1} << 61) - 1);
    Integer p;
    do {
        p = static_cast<unsigned long>(dist(rng));
    } while (!is_probable_prime(p));
    return p.get_ui();
}

}  // namespace

TupleCertificate certify_matrix(const MacaulayMatrix& m, const CertifyConfig& config, std::uint64_t orbit_size) {
    TupleCertificate cert;
    cert.degree = m.data.n;
    cert.tuple = m.tuple;
    cert.orbit_size = orbit_size;
    cert.d = m.data.d;
    cert.C = m.data.C;
    cert.D = m.data.D;
    cert.matrix_hash = m.content_hash();
    const std::size_t n_cols = m.matrix.n_cols;

    const MinorCertificate first = nonzero_maximal_minor(m.matrix, {PivotStrategy::Kind::markowitz, 0});
    if (first.is_zero()) {
        cert.rank_q = rank_over_rationals(m.matrix);
        cert.minor_gcd = 0;
        cert.status = CertStatus::degenerate;
        return cert;
    }
    cert.rank_q = n_cols;

    // Primes dividing every maximal minor; the gcd's small factors are
    // listed too so good candidates show up with their full-rank evidence.
    Integer sample_gcd = abs(first.value);
    Integer exact;
    bool have_exact = false;
    try {
        exact = minor_gcd_exhaustive(m.matrix, config.exhaustive_limit);
        have_exact = true;
    } catch (const MinorLimitExceeded&) {
        for (int s = 1; s < config.minors && sample_gcd != 1; ++s) {
            auto minor = nonzero_maximal_minor(m.matrix, {PivotStrategy::Kind::random, tuple_seed(config.seed, m.tuple, s)});
            mpz_gcd(sample_gcd.get_mpz_t(), sample_gcd.get_mpz_t(), minor.value.get_mpz_t());
        }
        if (config.exact_gcd) {
            exact = minor_gcd_modular(m.matrix, sample_gcd);
            have_exact = true;
        }
    }
    cert.minor_gcd = have_exact ? exact : sample_gcd;

    if (config.cross_check) {
        std::mt19937_64 rng(tuple_seed(config.seed, m.tuple, -1));
        for (int k = 0; k < 2; ++k) {
            const std::uint64_t q = random_prime(rng);
            if (rank_mod_p(m.matrix, q) != n_cols && !mpz_divisible_ui_p(cert.minor_gcd.get_mpz_t(), q))
                throw std::logic_error("certify: rank over Q disagrees with rank modulo " + std::to_string(q));
        }
    }

    const FactorResult factors = factorize(cert.minor_gcd, config.factor_budget);
    cert.unresolved_cofactor = factors.cofactor;
    std::map<Integer, bool> primes;
    for (const auto& [p, e] : factors.factors) primes[p] = true;
    if (have_exact && sample_gcd != cert.minor_gcd) {
        // Small primes of the sampled gcd that the exact gcd rules out.
        FactorBudget trial_only{config.factor_budget.trial_bound, 0};
        for (const auto& [p, e] : factorize(sample_gcd, trial_only).factors)
            if (p <= config.factor_budget.trial_bound) primes.emplace(p, false);
    }

    for (const auto& [p, expected_bad] : primes) {
        Candidate c;
        c.prime = p;
        c.rank_mod_p = rank_mod_prime(m.matrix, p);
        c.bad = c.rank_mod_p < n_cols;
        if (c.bad != expected_bad && have_exact)
            throw std::logic_error("certify: prime " + p.get_str() + " disagrees with the exact minor gcd");
        if (c.bad) cert.bad_primes.push_back(p);
        cert.candidates.push_back(std::move(c));
    }
    cert.status = cert.unresolved_cofactor > 1 ? CertStatus::incomplete : CertStatus::complete;
    return cert;
}

TupleCertificate certify_tuple(int n, const Tuple& tuple, const GTable& g_table, const CertifyConfig& config,
                               std::uint64_t orbit_size) {
    return certify_matrix(build_matrix(n, tuple, g_table), config, orbit_size);
}

DegreeReport::Outcome DegreeReport::outcome() const {
    if (!degenerate_tuples.empty()) return Outcome::degenerate;
    return complete ? Outcome::complete : Outcome::incomplete;
}

DegreeReport aggregate(int n, bool symmetry, std::vector<TupleCertificate> certificates, std::uint64_t tuples_total,
                       bool interrupted) {
    DegreeReport rep;
    rep.n = n;
    rep.data = degree_data(n);
    rep.symmetry = symmetry;
    rep.tuples_total = tuples_total;
    rep.interrupted = interrupted;
    rep.bounds = improved_bound(n);

    std::map<Integer, Tuple> witness;
    bool all_complete = true;
    for (const auto& cert : certificates) {
        rep.tuples_processed += cert.orbit_size;
        if (cert.status != CertStatus::complete) all_complete = false;
        if (cert.status == CertStatus::degenerate) rep.degenerate_tuples.push_back(cert.tuple);
        for (const auto& p : cert.bad_primes) witness.emplace(p, cert.tuple);
    }
    for (auto& [p, t] : witness) {
        rep.bad_primes.push_back(p);
        rep.witnesses.push_back({p, t});
    }
    rep.complete = all_complete && !interrupted && rep.tuples_processed == tuples_total;
    rep.certificates = std::move(certificates);
    return rep;
}

DegreeReport bad_primes(int n, const RunOptions& options) {
    if (n < 2) throw std::invalid_argument("bad_primes: n must be at least 2");
    if (options.jobs < 1) throw std::invalid_argument("bad_primes: jobs must be positive");
    const auto start = std::chrono::steady_clock::now();

    const GTable g_table(n);
    const std::vector<TupleOrbit> schedule = options.symmetry ? canonical_tuples(n) : all_tuples(n);
    std::uint64_t total = 1;
    for (int k = 0; k < n - 1; ++k) total *= static_cast<std::uint64_t>(n);

    std::optional<CertificateCache> cache;
    if (options.cache_dir) cache.emplace(*options.cache_dir);

    std::vector<std::optional<TupleCertificate>> slots(schedule.size());
    std::atomic<std::size_t> hits{0}, computed{0};
    std::atomic<bool> failed{false};
    std::string failure;

#pragma omp parallel for num_threads(options.jobs) schedule(dynamic, 1)
    for (std::size_t k = 0; k < schedule.size(); ++k) {
        if (failed.load() || (options.stop && options.stop->load())) continue;
        try {
            const auto& orbit = schedule[k];
            MacaulayMatrix m = build_matrix(n, orbit.representative, g_table);
            std::optional<TupleCertificate> cert;
            if (cache) cert = cache->load(m, options.certify);
            if (cert) {
                cert->orbit_size = orbit.size;
                ++hits;
            } else {
                cert = certify_matrix(m, options.certify, orbit.size);
                ++computed;
                if (cache) cache->store(*cert, options.certify);
            }
            slots[k] = std::move(cert);
        } catch (const std::exception& e) {
#pragma omp critical(caprimes_failure)
            {
                if (!failed.exchange(true)) failure = e.what();
            }
        }
    }
    if (failed.load()) throw std::runtime_error("bad_primes: " + failure);

    bool interrupted = false;
    std::vector<TupleCertificate> certs;
    for (auto& slot : slots) {
        if (slot)
            certs.push_back(std::move(*slot));
        else
            interrupted = true;
    }
    DegreeReport rep = aggregate(n, options.symmetry, std::move(certs), total, interrupted);
    rep.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rep.stats.cache_hits = hits.load();
    rep.stats.computed = computed.load();
    return rep;
}

nlohmann::ordered_json integer_to_json(const Integer& v) {
    if (v >= 0 && v.fits_ulong_p()) return static_cast<std::uint64_t>(v.get_ui());
    if (v.fits_slong_p()) return static_cast<std::int64_t>(v.get_si());
    return v.get_str();
}

Integer integer_from_json(const nlohmann::json& j) {
    if (j.is_number_unsigned()) return Integer(static_cast<unsigned long>(j.get<std::uint64_t>()));
    if (j.is_number_integer()) return Integer(static_cast<long>(j.get<std::int64_t>()));
    if (j.is_string()) return Integer(j.get<std::string>());
    throw std::invalid_argument("expected an integer");
}

nlohmann::ordered_json to_json(const TupleCertificate& cert) {
    nlohmann::ordered_json j;
    j["degree"] = cert.degree;
    j["tuple"] = cert.tuple.entries();
    j["orbit_size"] = cert.orbit_size;
    j["d"] = cert.d;
    j["C"] = integer_to_json(cert.C);
    j["D"] = integer_to_json(cert.D);
    j["rank_q"] = cert.rank_q;
    j["minor_gcd"] = integer_to_json(cert.minor_gcd);
    auto cands = nlohmann::ordered_json::array();
    for (const auto& c : cert.candidates) {
        nlohmann::ordered_json cj;
        cj["prime"] = integer_to_json(c.prime);
        cj["rank_mod_p"] = c.rank_mod_p;
        cj["verdict"] = c.bad ? "bad" : "good";
        cands.push_back(std::move(cj));
    }
    j["candidates"] = std::move(cands);
    auto bad = nlohmann::ordered_json::array();
    for (const auto& p : cert.bad_primes) bad.push_back(integer_to_json(p));
    j["bad_primes"] = std::move(bad);
    j["unresolved_cofactor"] = integer_to_json(cert.unresolved_cofactor);
    j["status"] = to_string(cert.status);
    j["matrix_hash"] = cert.matrix_hash;
    return j;
}

TupleCertificate certificate_from_json(const nlohmann::json& j) {
    TupleCertificate cert;
    cert.degree = j.at("degree").get<int>();
    cert.tuple = Tuple(j.at("tuple").get<std::vector<int>>());
    cert.orbit_size = j.at("orbit_size").get<std::uint64_t>();
    cert.d = j.at("d").get<int>();
    cert.C = integer_from_json(j.at("C"));
    cert.D = integer_from_json(j.at("D"));
    cert.rank_q = j.at("rank_q").get<std::size_t>();
    cert.minor_gcd = integer_from_json(j.at("minor_gcd"));
    for (const auto& cj : j.at("candidates")) {
        Candidate c;
        c.prime = integer_from_json(cj.at("prime"));
        c.rank_mod_p = cj.at("rank_mod_p").get<std::size_t>();
        c.bad = cj.at("verdict").get<std::string>() == "bad";
        cert.candidates.push_back(std::move(c));
    }
    for (const auto& p : j.at("bad_primes")) cert.bad_primes.push_back(integer_from_json(p));
    cert.unresolved_cofactor = integer_from_json(j.at("unresolved_cofactor"));
    cert.status = cert_status_from_string(j.at("status").get<std::string>());
    cert.matrix_hash = j.at("matrix_hash").get<std::string>();
    return cert;
}

nlohmann::ordered_json to_json(const DegreeReport& report, bool include_stats) {
    nlohmann::ordered_json j;
    j["degree"] = report.n;
    j["d"] = report.data.d;
    j["C"] = integer_to_json(report.data.C);
    j["D"] = integer_to_json(report.data.D);
    j["symmetry"] = report.symmetry;
    j["status"] = report.outcome() == DegreeReport::Outcome::degenerate
                      ? "degenerate"
                      : (report.complete ? "complete" : "incomplete");
    auto bad = nlohmann::ordered_json::array();
    auto witnesses = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < report.bad_primes.size(); ++k) {
        bad.push_back(integer_to_json(report.bad_primes[k]));
        witnesses.push_back({{"prime", integer_to_json(report.witnesses[k].prime)},
                             {"tuple", report.witnesses[k].tuple.entries()}});
    }
    j["bad_primes"] = std::move(bad);
    j["witnesses"] = std::move(witnesses);
    j["tuples_processed"] = report.tuples_processed;
    j["tuples_total"] = report.tuples_total;
    j["complete"] = report.complete;
    j["interrupted"] = report.interrupted;
    auto degenerate = nlohmann::ordered_json::array();
    for (const auto& t : report.degenerate_tuples) degenerate.push_back(t.entries());
    j["degenerate_tuples"] = std::move(degenerate);
    auto unresolved = nlohmann::ordered_json::array();
    for (const auto& c : report.certificates)
        if (c.unresolved_cofactor > 1)
            unresolved.push_back({{"tuple", c.tuple.entries()}, {"cofactor", integer_to_json(c.unresolved_cofactor)}});
    j["unresolved_cofactors"] = std::move(unresolved);

    const auto& b = report.bounds;
    nlohmann::ordered_json bj;
    bj["bound5_factored"] = b.bound5_factored;
    bj["bound5_digits"] = b.bound5_digits;
    bj["bound6_factored"] = b.bound6_factored;
    bj["bound6_digits"] = b.bound6_digits;
    bj["attaining_i"] = b.attaining_i;
    j["bounds"] = std::move(bj);

    auto certs = nlohmann::ordered_json::array();
    for (const auto& c : report.certificates) certs.push_back(to_json(c));
    j["certificates"] = std::move(certs);
    if (include_stats) {
        j["stats"] = {{"seconds", report.stats.seconds},
                      {"cache_hits", report.stats.cache_hits},
                      {"computed", report.stats.computed}};
    }
    return j;
}

CertificateCache::CertificateCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::filesystem::path CertificateCache::path_for(int degree, const Tuple& t, const std::string& hash,
                                                 const CertifyConfig& config) const {
    std::string name = t.to_string();
    std::replace(name.begin(), name.end(), ',', '-');
    return dir_ / ("n" + std::to_string(degree)) / (name + "_" + hash.substr(0, 16) + "_" + config.fingerprint() + ".json");
}

std::optional<TupleCertificate> CertificateCache::load(const MacaulayMatrix& m, const CertifyConfig& config) const {
    const std::string hash = m.content_hash();
    const auto path = path_for(m.data.n, m.tuple, hash, config);
    std::ifstream in(path);
    if (!in) return std::nullopt;
    try {
        auto cert = certificate_from_json(nlohmann::json::parse(in));
        if (cert.matrix_hash != hash || cert.tuple != m.tuple || cert.degree != m.data.n) return std::nullopt;
        return cert;
    } catch (const std::exception&) {
        // Truncated or foreign file: recompute.
        return std::nullopt;
    }
}

void CertificateCache::store(const TupleCertificate& cert, const CertifyConfig& config) const {
    const auto path = path_for(cert.degree, cert.tuple, cert.matrix_hash, config);
    std::filesystem::create_directories(path.parent_path());
    // Write-then-rename so an interrupted run never leaves a partial file.
    auto tmp = path;
    tmp += ".tmp" + std::to_string(omp_get_thread_num());
    {
        std::ofstream out(tmp);
        out << to_json(cert).dump(2) << '\n';
        if (!out) throw std::runtime_error("cache: cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::vector<std::filesystem::path> CertificateCache::list() const {
    std::vector<std::filesystem::path> out;
    if (!std::filesystem::exists(dir_)) return out;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(dir_))
        if (entry.is_regular_file() && entry.path().extension() == ".json") out.push_back(entry.path());
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t CertificateCache::clear() const {
    const auto files = list();
    for (const auto& f : files) std::filesystem::remove(f);
    return files.size();
}

}  // namespace caprimes
