#include "caprimes/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include "caprimes/macaulay.hpp"

namespace caprimes {

namespace {

std::string factored(const Integer& C, const std::vector<BoundFactor>& factors) {
    std::string s = C.get_str() + "!";
    for (const auto& f : factors) {
        if (f.multiplicity == 0) continue;
        s += "*" + f.value.get_str();
        if (f.multiplicity != 1) s += "^" + f.multiplicity.get_str();
    }
    return s;
}

double log10_factorial(const Integer& C) { return std::lgamma(C.get_d() + 1.0) / std::log(10.0); }

double log10_product(const std::vector<BoundFactor>& factors) {
    double total = 0.0;
    for (const auto& f : factors) total += f.multiplicity.get_d() * std::log10(f.value.get_d());
    return total;
}

Integer expand(const Integer& C, const std::vector<BoundFactor>& factors) {
    Integer r;
    mpz_fac_ui(r.get_mpz_t(), C.get_ui());
    Integer pw;
    for (const auto& f : factors) {
        mpz_pow_ui(pw.get_mpz_t(), f.value.get_mpz_t(), f.multiplicity.get_ui());
        r *= pw;
    }
    return r;
}

std::vector<BoundFactor> b_multiset(const DegreeData& dd) {
    const int n = dd.n;
    std::vector<BoundFactor> out;
    // binom(i+n-2, n-2) is strictly increasing in i, so i order is value order.
    for (int i = 1; i <= n - 1; ++i) out.push_back({i, binomial(i + n - 2, n - 2), binomial(dd.d - i + n - 2, n - 2)});
    return out;
}

}  // namespace

std::uint64_t decimal_digits(const Integer& v) {
    if (v == 0) return 1;
    Integer a = abs(v);
    std::uint64_t digits = mpz_sizeinbase(a.get_mpz_t(), 10);
    // sizeinbase may overshoot by one.
    Integer lower;
    mpz_ui_pow_ui(lower.get_mpz_t(), 10, digits - 1);
    if (a < lower) --digits;
    return digits;
}

Integer upper_bound(int n) {
    const DegreeData dd = degree_data(n);
    if (dd.C > kMaxExactBoundColumns) throw std::length_error("upper_bound: C! too large to expand");
    return expand(dd.C, b_multiset(dd));
}

BoundReport improved_bound(int n) {
    const DegreeData dd = degree_data(n);
    BoundReport rep;
    rep.n = n;
    rep.C = dd.C;
    rep.D = dd.D;
    rep.multiset = b_multiset(dd);

    // Take the C largest elements, walking i downwards.
    Integer need = dd.C;
    for (auto it = rep.multiset.rbegin(); it != rep.multiset.rend() && need > 0; ++it) {
        Integer take = it->multiplicity < need ? it->multiplicity : need;
        if (take > 0) rep.top.insert(rep.top.begin(), {it->i, it->value, take});
        need -= take;
        rep.attaining_i = it->i;
    }

    rep.bound5_factored = factored(dd.C, rep.multiset);
    rep.bound6_factored = factored(dd.C, rep.top);
    const double lf = log10_factorial(dd.C);
    rep.bound5_log10 = lf + log10_product(rep.multiset);
    rep.bound6_log10 = lf + log10_product(rep.top);

    if (dd.C <= kMaxExactBoundColumns) {
        rep.expanded = true;
        rep.bound5 = expand(dd.C, rep.multiset);
        rep.bound6 = expand(dd.C, rep.top);
        rep.bound5_digits = decimal_digits(rep.bound5);
        rep.bound6_digits = decimal_digits(rep.bound6);
    } else {
        rep.bound5_digits = static_cast<std::uint64_t>(std::floor(rep.bound5_log10)) + 1;
        rep.bound6_digits = static_cast<std::uint64_t>(std::floor(rep.bound6_log10)) + 1;
    }
    return rep;
}

}  // namespace caprimes
