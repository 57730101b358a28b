#include "caprimes/polycore.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace caprimes {

std::uint64_t ExponentVector::total_degree() const {
    return std::accumulate(exps_.begin(), exps_.end(), std::uint64_t{0});
}

bool GrevlexGreater::operator()(const ExponentVector& a, const ExponentVector& b) const {
    const auto da = a.total_degree();
    const auto db = b.total_degree();
    if (da != db) return da > db;
    // Equal degree: a > b iff the last nonzero entry of a - b is negative.
    for (std::size_t k = a.size(); k-- > 0;) {
        if (a[k] != b[k]) return a[k] < b[k];
    }
    return false;
}

std::size_t ExponentVectorHash::operator()(const ExponentVector& e) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (auto v : e.values()) {
        h ^= v;
        h *= 0x100000001b3ULL;
    }
    return h;
}

MultiPoly::MultiPoly(std::size_t n_vars) : n_vars_(n_vars) {
    if (n_vars == 0) throw std::invalid_argument("MultiPoly: n_vars must be positive");
}

MultiPoly MultiPoly::constant(std::size_t n_vars, const Integer& c) {
    MultiPoly p(n_vars);
    p.add_term(ExponentVector(n_vars), c);
    return p;
}

MultiPoly MultiPoly::variable(std::size_t n_vars, std::size_t k) {
    if (k < 1 || k > n_vars) throw std::invalid_argument("MultiPoly::variable: index out of range");
    ExponentVector e(n_vars);
    e[k - 1] = 1;
    MultiPoly p(n_vars);
    p.add_term(e, 1);
    return p;
}

Integer MultiPoly::coefficient(const ExponentVector& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Integer(0) : it->second;
}

void MultiPoly::add_term(const ExponentVector& e, const Integer& c) {
    if (e.size() != n_vars_) throw std::invalid_argument("MultiPoly::add_term: exponent length mismatch");
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

bool MultiPoly::is_homogeneous() const {
    if (terms_.empty()) return true;
    const auto deg = terms_.begin()->first.total_degree();
    for (const auto& [e, c] : terms_)
        if (e.total_degree() != deg) return false;
    return true;
}

std::uint64_t MultiPoly::total_degree() const {
    // Grevlex is graded, so the leading term has the largest degree.
    return terms_.empty() ? 0 : terms_.begin()->first.total_degree();
}

Integer MultiPoly::max_abs_coefficient() const {
    Integer best = 0;
    for (const auto& [e, c] : terms_)
        if (abs(c) > best) best = abs(c);
    return best;
}

void MultiPoly::check_same_ring(const MultiPoly& other) const {
    if (other.n_vars_ != n_vars_) throw std::invalid_argument("MultiPoly: variable count mismatch");
}

MultiPoly MultiPoly::operator-() const {
    MultiPoly r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& other) {
    check_same_ring(other);
    for (const auto& [e, c] : other.terms_) add_term(e, c);
    return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& other) {
    check_same_ring(other);
    for (const auto& [e, c] : other.terms_) add_term(e, -c);
    return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    a.check_same_ring(b);
    MultiPoly r(a.n_vars_);
    ExponentVector e(a.n_vars_);
    for (const auto& [ea, ca] : a.terms_) {
        for (const auto& [eb, cb] : b.terms_) {
            for (std::size_t k = 0; k < a.n_vars_; ++k) e[k] = ea[k] + eb[k];
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

bool operator==(const MultiPoly& a, const MultiPoly& b) {
    return a.n_vars_ == b.n_vars_ && a.terms_ == b.terms_;
}

std::string MultiPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        Integer mag = abs(c);
        if (first) {
            if (c < 0) out << '-';
        } else {
            out << (c < 0 ? " - " : " + ");
        }
        first = false;

        bool wrote = false;
        if (mag != 1 || e.total_degree() == 0) {
            out << mag.get_str();
            wrote = true;
        }
        for (std::size_t k = 0; k < e.size(); ++k) {
            if (e[k] == 0) continue;
            if (wrote) out << '*';
            out << 'x' << (k + 1);
            if (e[k] > 1) out << '^' << e[k];
            wrote = true;
        }
    }
    return out.str();
}

MultiPoly elementary_symmetric(std::size_t n_vars, std::size_t i) {
    if (i < 1 || i > n_vars)
        throw std::invalid_argument("elementary_symmetric: i must lie in [1, n_vars]");
    MultiPoly r(n_vars);
    // Walk all i-subsets of {0..n_vars-1} via a selection mask.
    std::vector<bool> pick(n_vars, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(i), true);
    do {
        ExponentVector e(n_vars);
        for (std::size_t k = 0; k < n_vars; ++k) e[k] = pick[k] ? 1 : 0;
        r.add_term(e, 1);
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return r;
}

MultiPoly phi_apply(const MultiPoly& f, int j, int n) {
    if (n < 2) throw std::invalid_argument("phi_apply: degree must be at least 2");
    if (j < 1 || j > n) throw std::invalid_argument("phi_apply: j must lie in [1, n]");
    const auto n_vars = static_cast<std::size_t>(n - 1);
    if (f.n_vars() != n_vars) throw std::invalid_argument("phi_apply: f must have n-1 variables");
    if (j == n) return f;

    const auto jj = static_cast<std::size_t>(j);
    std::vector<MultiPoly> image;
    image.reserve(n_vars);
    for (std::size_t k = 1; k <= n_vars; ++k) {
        if (k == jj)
            image.push_back(-MultiPoly::variable(n_vars, jj));
        else
            image.push_back(MultiPoly::variable(n_vars, k) - MultiPoly::variable(n_vars, jj));
    }

    // powers[k][e] = image[k]^e, grown on demand.
    std::vector<std::vector<MultiPoly>> powers(n_vars);
    auto power = [&](std::size_t k, std::uint32_t e) -> const MultiPoly& {
        auto& pk = powers[k];
        if (pk.empty()) pk.push_back(MultiPoly::constant(n_vars, 1));
        while (pk.size() <= e) pk.push_back(pk.back() * image[k]);
        return pk[e];
    };

    MultiPoly r(n_vars);
    for (const auto& [e, c] : f.terms()) {
        MultiPoly term = MultiPoly::constant(n_vars, c);
        for (std::size_t k = 0; k < n_vars; ++k)
            if (e[k] > 0) term = term * power(k, e[k]);
        r += term;
    }
    return r;
}

MultiPoly build_G(int n, int j, int i) {
    if (n < 2) throw std::invalid_argument("build_G: degree must be at least 2");
    if (i < 1 || i > n - 1) throw std::invalid_argument("build_G: i must lie in [1, n-1]");
    return phi_apply(elementary_symmetric(static_cast<std::size_t>(n - 1), static_cast<std::size_t>(i)), j, n);
}

MultiPoly mul_monomial(const MultiPoly& f, const ExponentVector& alpha) {
    if (alpha.size() != f.n_vars()) throw std::invalid_argument("mul_monomial: exponent length mismatch");
    MultiPoly r(f.n_vars());
    ExponentVector e(f.n_vars());
    for (const auto& [ef, c] : f.terms()) {
        for (std::size_t k = 0; k < e.size(); ++k) e[k] = ef[k] + alpha[k];
        r.add_term(e, c);
    }
    return r;
}

GTable::GTable(int n) : n_(n) {
    if (n < 2) throw std::invalid_argument("GTable: degree must be at least 2");
    table_.reserve(static_cast<std::size_t>(n * (n - 1)));
    for (int j = 1; j <= n; ++j)
        for (int i = 1; i <= n - 1; ++i) table_.push_back(build_G(n, j, i));
}

const MultiPoly& GTable::at(int j, int i) const {
    if (j < 1 || j > n_ || i < 1 || i > n_ - 1) throw std::out_of_range("GTable::at: index out of range");
    return table_[static_cast<std::size_t>((j - 1) * (n_ - 1) + (i - 1))];
}

}  // namespace caprimes
