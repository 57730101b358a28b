#ifndef CAPRIMES_CERTIFIER_HPP
#define CAPRIMES_CERTIFIER_HPP

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "caprimes/bounds.hpp"
#include "caprimes/exactlinalg.hpp"
#include "caprimes/macaulay.hpp"

namespace caprimes {

struct CertifyConfig {
    std::uint64_t exhaustive_limit = 10'000;  ///< max binom(D, C) for the exhaustive minor gcd
    FactorBudget factor_budget;
    int minors = 4;                           ///< distinct pivot strategies feeding the gcd
    std::uint64_t seed = 0;
    /// Refine the gcd of sampled minors to the exact gcd of all maximal
    /// minors by lattice triangularization modulo it.
    bool exact_gcd = true;
    /// Confirm full rank over Q modulo two random 61-bit primes.
    bool cross_check = true;

    /// Stable string identifying every setting that can change a certificate.
    std::string fingerprint() const;
};

enum class CertStatus { complete, incomplete, degenerate };

std::string to_string(CertStatus s);
CertStatus cert_status_from_string(const std::string& s);

struct Candidate {
    Integer prime;
    std::size_t rank_mod_p = 0;
    bool bad = false;
};

/// Outcome of checking one tuple T.
struct TupleCertificate {
    int degree = 0;
    Tuple tuple;
    std::uint64_t orbit_size = 1;
    int d = 0;
    Integer C;
    Integer D;
    std::size_t rank_q = 0;
    /// Exact gcd of all maximal minors when computed exhaustively or refined;
    /// otherwise a multiple of it. Zero when rank_q < C.
    Integer minor_gcd;
    std::vector<Candidate> candidates;
    std::vector<Integer> bad_primes;
    Integer unresolved_cofactor = 1;
    CertStatus status = CertStatus::complete;
    std::string matrix_hash;

    friend bool operator==(const TupleCertificate&, const TupleCertificate&);
};

TupleCertificate certify_tuple(int n, const Tuple& tuple, const GTable& g_table, const CertifyConfig& config,
                               std::uint64_t orbit_size = 1);

/// Same as above on an already built matrix.
TupleCertificate certify_matrix(const MacaulayMatrix& m, const CertifyConfig& config, std::uint64_t orbit_size = 1);

/// Persists certificates as one JSON file each, keyed by degree, tuple, matrix
/// hash and configuration fingerprint.
class CertificateCache {
public:
    explicit CertificateCache(std::filesystem::path dir);

    const std::filesystem::path& dir() const { return dir_; }
    std::optional<TupleCertificate> load(const MacaulayMatrix& m, const CertifyConfig& config) const;
    void store(const TupleCertificate& cert, const CertifyConfig& config) const;
    std::vector<std::filesystem::path> list() const;
    std::size_t clear() const;

private:
    std::filesystem::path path_for(int degree, const Tuple& t, const std::string& hash, const CertifyConfig& config) const;

    std::filesystem::path dir_;
};

struct RunOptions {
    int jobs = 1;
    bool symmetry = true;
    CertifyConfig certify;
    std::optional<std::filesystem::path> cache_dir;
    /// Polled between tuples; once set, no new tuple is started.
    const std::atomic<bool>* stop = nullptr;
};

struct Witness {
    Integer prime;
    Tuple tuple;
};

struct RunStats {
    double seconds = 0.0;
    std::size_t cache_hits = 0;
    std::size_t computed = 0;
};

struct DegreeReport {
    int n = 0;
    DegreeData data;
    bool symmetry = true;
    std::vector<Integer> bad_primes;   ///< ascending
    std::vector<Witness> witnesses;    ///< one per bad prime, same order
    std::uint64_t tuples_processed = 0;  ///< members of T covered (orbit sizes summed)
    std::uint64_t tuples_total = 0;
    bool complete = false;
    bool interrupted = false;
    std::vector<Tuple> degenerate_tuples;
    BoundReport bounds;
    std::vector<TupleCertificate> certificates;  ///< in scheduling order
    RunStats stats;

    enum class Outcome { complete, incomplete, degenerate };
    Outcome outcome() const;
};

/// Parallel degree run: certifies every scheduled tuple on `jobs` OpenMP
/// threads and aggregates deterministically.
DegreeReport bad_primes(int n, const RunOptions& options);

/// Deterministic aggregation of certificates given in scheduling order.
DegreeReport aggregate(int n, bool symmetry, std::vector<TupleCertificate> certificates, std::uint64_t tuples_total,
                       bool interrupted);

nlohmann::ordered_json to_json(const TupleCertificate& cert);
TupleCertificate certificate_from_json(const nlohmann::json& j);
/// Report JSON; timing and cache statistics only when include_stats is set.
nlohmann::ordered_json to_json(const DegreeReport& report, bool include_stats = false);

/// JSON number when the value fits in 64 bits, decimal string otherwise.
nlohmann::ordered_json integer_to_json(const Integer& v);
Integer integer_from_json(const nlohmann::json& j);

}  // namespace caprimes

#endif  // CAPRIMES_CERTIFIER_HPP
