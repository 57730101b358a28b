#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

#include "caprimes/exactlinalg.hpp"

namespace caprimes {

namespace {

std::vector<unsigned long> primes_up_to(std::uint64_t bound) {
    std::vector<bool> composite(bound + 1, false);
    std::vector<unsigned long> primes;
    for (std::uint64_t i = 2; i <= bound; ++i) {
        if (composite[i]) continue;
        primes.push_back(static_cast<unsigned long>(i));
        for (std::uint64_t j = i * i; j <= bound; j += i) composite[j] = true;
    }
    return primes;
}

const std::vector<unsigned long>& sieve(std::uint64_t bound) {
    static std::mutex mu;
    static std::map<std::uint64_t, std::vector<unsigned long>> cache;
    std::lock_guard lock(mu);
    auto it = cache.find(bound);
    if (it == cache.end()) it = cache.emplace(bound, primes_up_to(bound)).first;
    return it->second;
}

/// Brent's variant of Pollard rho. Returns a nontrivial factor of the odd
/// composite n, or 0 once `budget` iterations are spent.
mpz_class pollard_brent(const mpz_class& n, std::uint64_t& budget) {
    mpz_class y, x, ys, q, g, diff;
    for (unsigned long c = 1; budget > 0; ++c) {
        y = 2;
        q = 1;
        g = 1;
        std::uint64_t r = 1;
        constexpr std::uint64_t batch = 128;
        auto step = [&](mpz_class& v) {
            v = v * v + c;
            mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
        };
        while (g == 1 && budget > 0) {
            x = y;
            for (std::uint64_t i = 0; i < r; ++i) step(y);
            std::uint64_t k = 0;
            while (k < r && g == 1 && budget > 0) {
                ys = y;
                const std::uint64_t m = std::min({batch, r - k, budget});
                for (std::uint64_t i = 0; i < m; ++i) {
                    step(y);
                    diff = abs(x - y);
                    q = q * diff;
                    mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                }
                budget -= m;
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                k += m;
            }
            r *= 2;
        }
        if (g == n) {
            // Batch overshot; back off one step at a time.
            do {
                step(ys);
                diff = abs(x - ys);
                mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
            } while (g == 1);
        }
        if (g != 1 && g != n) return g;
    }
    return 0;
}

void split(const mpz_class& n, std::uint64_t budget, std::map<mpz_class, unsigned>& found, mpz_class& cofactor) {
    if (n == 1) return;
    if (is_probable_prime(n)) {
        ++found[n];
        return;
    }
    // Perfect powers defeat rho's cycle structure often enough to special-case.
    if (mpz_perfect_power_p(n.get_mpz_t())) {
        mpz_class root;
        for (unsigned long e = 2;; ++e) {
            if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), e) != 0) {
                std::map<mpz_class, unsigned> sub;
                mpz_class sub_cofactor = 1;
                split(root, budget, sub, sub_cofactor);
                for (auto& [p, k] : sub) found[p] += k * static_cast<unsigned>(e);
                mpz_class scaled;
                mpz_pow_ui(scaled.get_mpz_t(), sub_cofactor.get_mpz_t(), e);
                cofactor *= scaled;
                return;
            }
        }
    }
    std::uint64_t left = budget;
    mpz_class d = pollard_brent(n, left);
    if (d == 0) {
        cofactor *= n;
        return;
    }
    split(d, budget, found, cofactor);
    split(n / d, budget, found, cofactor);
}

}  // namespace

bool is_probable_prime(const Integer& n) {
    return n >= 2 && mpz_probab_prime_p(n.get_mpz_t(), 30) > 0;
}

FactorResult factorize(const Integer& n, const FactorBudget& budget) {
    if (n < 1) throw std::invalid_argument("factorize: input must be positive");
    FactorResult out;
    mpz_class rest = n;
    std::map<mpz_class, unsigned> found;

    for (unsigned long p : sieve(budget.trial_bound)) {
        if (rest == 1) break;
        if (mpz_cmp_ui(rest.get_mpz_t(), p * p) < 0) {
            // rest has no factor <= sqrt(rest) below the bound: it is prime.
            ++found[rest];
            rest = 1;
            break;
        }
        unsigned e = 0;
        while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
            mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
            ++e;
        }
        if (e) found[mpz_class(p)] += e;
    }
    mpz_class cofactor = 1;
    split(rest, budget.pollard_iterations, found, cofactor);

    for (auto& [p, e] : found) out.factors.emplace_back(p, e);
    out.cofactor = cofactor;
    return out;
}

}  // namespace caprimes
