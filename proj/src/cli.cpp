#include "caprimes/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "caprimes/bounds.hpp"
#include "caprimes/certifier.hpp"
#include "caprimes/oracle.hpp"

namespace caprimes {

std::atomic<bool>& interrupt_flag() {
    static std::atomic<bool> flag{false};
    return flag;
}

namespace {

struct CommonFlags {
    int degree = 0;
    std::string format = "json";
    std::string out_file;
};

struct RunFlags {
    int jobs = 1;
    bool no_symmetry = false;
    bool stats = false;
    std::string cache_dir;
    std::uint64_t seed = 0;
    std::uint64_t exhaustive_limit = 10'000;
    std::uint64_t trial_bound = 1'000'000;
    std::uint64_t pollard_budget = 10'000'000;
    int minors = 4;
    bool no_exact_gcd = false;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
    cmd->add_option("--seed", f.seed, "Seed for randomized pivot strategies");
    cmd->add_option("--exhaustive-limit", f.exhaustive_limit, "Largest binom(D,C) enumerated exhaustively")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--trial-bound", f.trial_bound, "Trial division bound")->check(CLI::PositiveNumber);
    cmd->add_option("--pollard-budget", f.pollard_budget, "Pollard rho iterations per composite")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--minors", f.minors, "Maximal minors sampled per tuple")->check(CLI::PositiveNumber);
    cmd->add_flag("--no-exact-gcd", f.no_exact_gcd, "Report the gcd of sampled minors instead of the exact minor gcd");
}

CertifyConfig make_config(const RunFlags& f) {
    CertifyConfig c;
    c.exhaustive_limit = f.exhaustive_limit;
    c.factor_budget = {f.trial_bound, f.pollard_budget};
    c.minors = f.minors;
    c.seed = f.seed;
    c.exact_gcd = !f.no_exact_gcd;
    return c;
}

std::optional<std::filesystem::path> cache_dir(const std::string& flag) {
    if (!flag.empty()) return std::filesystem::path(flag);
    if (const char* env = std::getenv(kCacheDirEnv); env && *env) return std::filesystem::path(env);
    return std::nullopt;
}

void emit(const std::string& text, const CommonFlags& common, std::ostream& out) {
    if (common.out_file.empty()) {
        out << text;
        return;
    }
    std::ofstream file(common.out_file);
    file << text;
    if (!file) throw std::runtime_error("cannot write " + common.out_file);
}

int exit_code(const DegreeReport& rep) {
    switch (rep.outcome()) {
        case DegreeReport::Outcome::complete: return kExitComplete;
        case DegreeReport::Outcome::incomplete: return kExitIncomplete;
        case DegreeReport::Outcome::degenerate: return kExitDegenerate;
    }
    return kExitIncomplete;
}

int exit_code(const TupleCertificate& cert) {
    switch (cert.status) {
        case CertStatus::complete: return kExitComplete;
        case CertStatus::incomplete: return kExitIncomplete;
        case CertStatus::degenerate: return kExitDegenerate;
    }
    return kExitIncomplete;
}

std::string join(const std::vector<Integer>& v) {
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + v[k].get_str();
    return s.empty() ? "(none)" : s;
}

std::string report_table(const DegreeReport& rep) {
    std::ostringstream t;
    t << "degree " << rep.n << "   d=" << rep.data.d << "   C=" << rep.data.C.get_str() << "   D=" << rep.data.D.get_str()
      << '\n';
    t << "tuples  " << rep.tuples_processed << "/" << rep.tuples_total << " (" << rep.certificates.size()
      << (rep.symmetry ? " orbits" : " tuples") << " certified)\n";
    t << "status  "
      << (rep.outcome() == DegreeReport::Outcome::degenerate ? "degenerate"
                                                              : (rep.complete ? "complete" : "incomplete"))
      << '\n';
    t << "bad primes  " << join(rep.bad_primes) << '\n';
    for (const auto& w : rep.witnesses) t << "  " << std::setw(6) << w.prime.get_str() << "  witness (" << w.tuple.to_string() << ")\n";
    for (const auto& d : rep.degenerate_tuples) t << "  DEGENERATE over Q: (" << d.to_string() << ")\n";
    for (const auto& c : rep.certificates)
        if (c.unresolved_cofactor > 1)
            t << "  unresolved cofactor at (" << c.tuple.to_string() << "): " << c.unresolved_cofactor.get_str() << '\n';
    t << "bound5  " << rep.bounds.bound5_factored << "  (" << rep.bounds.bound5_digits << " digits)\n";
    t << "bound6  " << rep.bounds.bound6_factored << "  (" << rep.bounds.bound6_digits << " digits)\n";
    return t.str();
}

std::string certificate_table(const TupleCertificate& c) {
    std::ostringstream t;
    t << "degree " << c.degree << "   tuple (" << c.tuple.to_string() << ")   d=" << c.d << "   C=" << c.C.get_str()
      << "   D=" << c.D.get_str() << '\n';
    t << "rank over Q  " << c.rank_q << '\n';
    t << "minor gcd    " << c.minor_gcd.get_str() << '\n';
    for (const auto& cand : c.candidates)
        t << "  p=" << cand.prime.get_str() << "  rank mod p " << cand.rank_mod_p << "  " << (cand.bad ? "bad" : "good")
          << '\n';
    t << "bad primes   " << join(c.bad_primes) << '\n';
    t << "status       " << to_string(c.status) << '\n';
    t << "matrix hash  " << c.matrix_hash << '\n';
    return t.str();
}

nlohmann::ordered_json bounds_json(const BoundReport& b) {
    nlohmann::ordered_json j;
    j["n"] = b.n;
    j["C"] = integer_to_json(b.C);
    j["D"] = integer_to_json(b.D);
    auto ms = nlohmann::ordered_json::array();
    for (const auto& f : b.multiset)
        ms.push_back({{"i", f.i}, {"value", integer_to_json(f.value)}, {"multiplicity", integer_to_json(f.multiplicity)}});
    j["b_multiset"] = std::move(ms);
    j["attaining_i"] = b.attaining_i;
    j["bound5"] = {{"factored", b.bound5_factored}, {"digits", b.bound5_digits}};
    j["bound6"] = {{"factored", b.bound6_factored}, {"digits", b.bound6_digits}};
    if (b.expanded) {
        j["bound5"]["value"] = b.bound5.get_str();
        j["bound6"]["value"] = b.bound6.get_str();
    } else {
        j["bound5"]["log10"] = b.bound5_log10;
        j["bound6"]["log10"] = b.bound6_log10;
    }
    return j;
}

std::string bounds_table(const BoundReport& b) {
    std::ostringstream t;
    t << "n  C  D          " << b.n << "  " << b.C.get_str() << "  " << b.D.get_str() << '\n';
    t << "b multiset       ";
    for (const auto& f : b.multiset) t << f.value.get_str() << " x" << f.multiplicity.get_str() << "  ";
    t << "\nb_{D-C+1} from i " << b.attaining_i << '\n';
    auto value = [&](const Integer& v, std::uint64_t digits) {
        return digits <= 60 ? v.get_str() : std::string("...");
    };
    t << "bound5  " << b.bound5_factored << "  (" << b.bound5_digits << " digits)";
    if (b.expanded) t << "  = " << value(b.bound5, b.bound5_digits);
    t << "\nbound6  " << b.bound6_factored << "  (" << b.bound6_digits << " digits)";
    if (b.expanded) t << "  = " << value(b.bound6, b.bound6_digits);
    t << '\n';
    return t.str();
}

void check_degree(int n) {
    if (n < 2) throw CLI::ValidationError("--degree", "degree must be at least 2");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bad primes for the Casas-Alvero conjecture via Macaulay coefficient matrices"};
    app.require_subcommand(1);

    CommonFlags common;
    RunFlags run;

    auto add_common = [&](CLI::App* cmd, bool with_format) {
        cmd->add_option("--degree,-n", common.degree, "Degree n")->required();
        if (with_format)
            cmd->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"json", "table"}));
        cmd->add_option("--out,-o", common.out_file, "Write output to a file instead of stdout");
    };

    auto* badprimes_cmd = app.add_subcommand("badprimes", "Compute the set of bad primes for a degree");
    add_common(badprimes_cmd, true);
    add_run_flags(badprimes_cmd, run);
    badprimes_cmd->add_option("--jobs,-j", run.jobs, "Worker threads")->check(CLI::PositiveNumber);
    badprimes_cmd->add_flag("--no-symmetry", run.no_symmetry, "Certify every tuple instead of one per orbit");
    badprimes_cmd->add_option("--cache-dir", run.cache_dir, std::string("Certificate cache (default: $") + kCacheDirEnv + ")");
    badprimes_cmd->add_flag("--stats", run.stats, "Include wall-clock and cache statistics");

    std::string tuple_text, export_path;
    auto* tuple_cmd = app.add_subcommand("tuple", "Certify a single tuple");
    add_common(tuple_cmd, true);
    add_run_flags(tuple_cmd, run);
    tuple_cmd->add_option("--t,-t", tuple_text, "Tuple j_1,...,j_{n-1}")->required();
    tuple_cmd->add_option("--export-matrix", export_path, "Write the matrix in triplet format");

    auto* bounds_cmd = app.add_subcommand("bounds", "Upper bounds on bad primes");
    add_common(bounds_cmd, true);

    std::uint32_t search_p = 0, search_k = 1;
    std::uint64_t search_budget = kDefaultSearchBudget;
    auto* search_cmd = app.add_subcommand("search", "Exhaustive search for counterexamples over GF(p^k)");
    add_common(search_cmd, false);
    search_cmd->add_option("--p,-p", search_p, "Characteristic")->required();
    search_cmd->add_option("--k,-k", search_k, "Extension degree")->check(CLI::PositiveNumber);
    search_cmd->add_option("--budget", search_budget, "Largest q^n enumerated")->check(CLI::PositiveNumber);

    std::string cache_action, cache_flag;
    auto* cache_cmd = app.add_subcommand("cache", "Inspect or clear the certificate cache");
    cache_cmd->add_option("action", cache_action, "list | clear")->required()->check(CLI::IsMember({"list", "clear"}));
    cache_cmd->add_option("--cache-dir", cache_flag, std::string("Cache directory (default: $") + kCacheDirEnv + ")");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitComplete : kExitUsage;
    }

    try {
        if (*badprimes_cmd) {
            check_degree(common.degree);
            RunOptions opts;
            opts.jobs = run.jobs;
            opts.symmetry = !run.no_symmetry;
            opts.certify = make_config(run);
            opts.cache_dir = cache_dir(run.cache_dir);
            opts.stop = &interrupt_flag();
            DegreeReport rep = bad_primes(common.degree, opts);
            if (common.format == "json")
                emit(to_json(rep, run.stats).dump(2) + "\n", common, out);
            else
                emit(report_table(rep), common, out);
            if (run.stats)
                err << "time " << std::fixed << std::setprecision(2) << rep.stats.seconds << " s, computed "
                    << rep.stats.computed << ", cache hits " << rep.stats.cache_hits << '\n';
            if (rep.interrupted) err << "interrupted: partial report; rerun with the same cache to resume\n";
            return exit_code(rep);
        }
        if (*tuple_cmd) {
            check_degree(common.degree);
            const Tuple t = Tuple::parse(tuple_text, common.degree);
            const GTable g_table(common.degree);
            const MacaulayMatrix m = build_matrix(common.degree, t, g_table);
            if (!export_path.empty()) {
                std::ofstream file(export_path);
                file << m.export_triplets();
                if (!file) throw std::runtime_error("cannot write " + export_path);
            }
            const TupleCertificate cert = certify_matrix(m, make_config(run));
            emit(common.format == "json" ? to_json(cert).dump(2) + "\n" : certificate_table(cert), common, out);
            return exit_code(cert);
        }
        if (*bounds_cmd) {
            check_degree(common.degree);
            const BoundReport b = improved_bound(common.degree);
            emit(common.format == "json" ? bounds_json(b).dump(2) + "\n" : bounds_table(b), common, out);
            return kExitComplete;
        }
        if (*search_cmd) {
            check_degree(common.degree);
            const SearchResult res = search_counterexamples(common.degree, search_p, search_k, search_budget);
            emit(to_json(res).dump(2) + "\n", common, out);
            return kExitComplete;
        }
        if (*cache_cmd) {
            const auto dir = cache_dir(cache_flag);
            if (!dir) throw CLI::ValidationError("--cache-dir", std::string("no cache directory (set --cache-dir or $") + kCacheDirEnv + ")");
            CertificateCache cache(*dir);
            if (cache_action == "list") {
                for (const auto& f : cache.list()) out << f.string() << '\n';
            } else {
                out << "removed " << cache.clear() << " certificates\n";
            }
            return kExitComplete;
        }
    } catch (const CLI::Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::length_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const SearchBudgetExceeded& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace caprimes
