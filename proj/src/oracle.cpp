#include "caprimes/oracle.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <omp.h>

namespace caprimes {

namespace {

std::uint32_t pow_mod32(std::uint64_t b, std::uint64_t e, std::uint32_t p) {
    std::uint64_t r = 1;
    b %= p;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return static_cast<std::uint32_t>(r);
}

}  // namespace

GaloisField::GaloisField(std::uint32_t p, std::uint32_t k) : p_(p), k_(k) {
    if (!is_probable_prime(Integer(p))) throw std::invalid_argument("GaloisField: characteristic must be prime");
    if (k < 1) throw std::invalid_argument("GaloisField: extension degree must be positive");
    Integer q = 1;
    for (std::uint32_t e = 0; e < k; ++e) q *= p;
    if (q > (1u << 24)) throw std::invalid_argument("GaloisField: field too large for table arithmetic");
    q_ = static_cast<std::uint32_t>(q.get_ui());

    if (k == 1) {
        modulus_ = {0, 1};
        return;
    }

    // Try monic degree-k polynomials in lexicographic order until t has order q - 1.
    std::vector<std::uint32_t> tail(k, 0);  // tail[e] = coefficient of t^e
    for (std::uint64_t code = 0; code < q_; ++code) {
        std::uint64_t rest = code;
        for (std::uint32_t e = 0; e < k; ++e) {
            tail[e] = static_cast<std::uint32_t>(rest % p);
            rest /= p;
        }
        if (tail[0] == 0) continue;

        std::vector<std::uint32_t> cur(k, 0);
        cur[0] = 1;
        std::vector<Elem> exp;
        exp.reserve(q_ - 1);
        bool primitive = true;
        for (std::uint32_t i = 0; i < q_ - 1; ++i) {
            Elem code_val = 0;
            for (std::uint32_t e = k; e-- > 0;) code_val = code_val * p + cur[e];
            if (i > 0 && code_val == 1) {
                primitive = false;
                break;
            }
            exp.push_back(code_val);
            // cur *= t modulo t^k + tail.
            const std::uint32_t top = cur[k - 1];
            for (std::uint32_t e = k - 1; e > 0; --e) cur[e] = cur[e - 1];
            cur[0] = 0;
            for (std::uint32_t e = 0; e < k; ++e)
                cur[e] = static_cast<std::uint32_t>((cur[e] + static_cast<std::uint64_t>(p - tail[e]) * top) % p);
        }
        Elem back = 0;
        for (std::uint32_t e = k; e-- > 0;) back = back * p + cur[e];
        if (!primitive || back != 1) continue;
        modulus_.assign(tail.begin(), tail.end());
        modulus_.push_back(1);
        exp_ = std::move(exp);
        log_.assign(q_, 0);
        for (std::uint32_t i = 0; i < q_ - 1; ++i) log_[exp_[i]] = i;
        return;
    }
    throw std::logic_error("GaloisField: no primitive polynomial found");
}

GaloisField::Elem GaloisField::from_int(long v) const {
    long r = v % static_cast<long>(p_);
    return static_cast<Elem>(r < 0 ? r + static_cast<long>(p_) : r);
}

GaloisField::Elem GaloisField::add(Elem a, Elem b) const {
    if (k_ == 1) {
        Elem s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    Elem out = 0, scale = 1;
    while (a || b) {
        Elem da = a % p_, db = b % p_;
        Elem s = da + db;
        if (s >= p_) s -= p_;
        out += s * scale;
        scale *= p_;
        a /= p_;
        b /= p_;
    }
    return out;
}

GaloisField::Elem GaloisField::sub(Elem a, Elem b) const {
    if (k_ == 1) return a >= b ? a - b : a + p_ - b;
    Elem out = 0, scale = 1;
    while (a || b) {
        Elem da = a % p_, db = b % p_;
        Elem s = da >= db ? da - db : da + p_ - db;
        out += s * scale;
        scale *= p_;
        a /= p_;
        b /= p_;
    }
    return out;
}

GaloisField::Elem GaloisField::mul(Elem a, Elem b) const {
    if (k_ == 1) return static_cast<Elem>(static_cast<std::uint64_t>(a) * b % p_);
    if (a == 0 || b == 0) return 0;
    std::uint32_t e = log_[a] + log_[b];
    if (e >= q_ - 1) e -= q_ - 1;
    return exp_[e];
}

GaloisField::Elem GaloisField::inv(Elem a) const {
    if (a == 0) throw std::domain_error("GaloisField: inverse of zero");
    if (k_ == 1) return pow_mod32(a, p_ - 2, p_);
    return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
}

FqPoly::FqPoly(std::shared_ptr<const GaloisField> field, std::vector<Elem> low_first)
    : field_(std::move(field)), c_(std::move(low_first)) {
    if (!field_) throw std::invalid_argument("FqPoly: null field");
    for (Elem e : c_)
        if (e >= field_->order()) throw std::invalid_argument("FqPoly: coefficient outside the field");
    trim();
}

FqPoly FqPoly::from_ints(std::shared_ptr<const GaloisField> field, const std::vector<long>& high_first) {
    std::vector<Elem> c;
    c.reserve(high_first.size());
    for (auto it = high_first.rbegin(); it != high_first.rend(); ++it) c.push_back(field->from_int(*it));
    return FqPoly(std::move(field), std::move(c));
}

void FqPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

std::vector<FqPoly::Elem> FqPoly::high_first() const { return {c_.rbegin(), c_.rend()}; }

FqPoly FqPoly::monic() const {
    if (is_zero()) return *this;
    const Elem inv = field_->inv(leading());
    std::vector<Elem> c(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) c[i] = field_->mul(c_[i], inv);
    return FqPoly(field_, std::move(c));
}

FqPoly FqPoly::operator+(const FqPoly& o) const {
    std::vector<Elem> c(std::max(c_.size(), o.c_.size()), 0);
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = field_->add(i < c_.size() ? c_[i] : 0, i < o.c_.size() ? o.c_[i] : 0);
    return FqPoly(field_, std::move(c));
}

FqPoly FqPoly::operator-(const FqPoly& o) const {
    std::vector<Elem> c(std::max(c_.size(), o.c_.size()), 0);
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = field_->sub(i < c_.size() ? c_[i] : 0, i < o.c_.size() ? o.c_[i] : 0);
    return FqPoly(field_, std::move(c));
}

FqPoly FqPoly::operator*(const FqPoly& o) const {
    if (is_zero() || o.is_zero()) return FqPoly(field_);
    std::vector<Elem> c(c_.size() + o.c_.size() - 1, 0);
    for (std::size_t i = 0; i < c_.size(); ++i)
        for (std::size_t j = 0; j < o.c_.size(); ++j) c[i + j] = field_->add(c[i + j], field_->mul(c_[i], o.c_[j]));
    return FqPoly(field_, std::move(c));
}

std::pair<FqPoly, FqPoly> FqPoly::divmod(const FqPoly& o) const {
    if (o.is_zero()) throw std::domain_error("FqPoly: division by zero polynomial");
    std::vector<Elem> rem = c_;
    if (rem.size() < o.c_.size()) return {FqPoly(field_), *this};
    std::vector<Elem> quot(rem.size() - o.c_.size() + 1, 0);
    const Elem lead_inv = field_->inv(o.leading());
    for (std::size_t k = quot.size(); k-- > 0;) {
        const Elem coef = field_->mul(rem[k + o.c_.size() - 1], lead_inv);
        quot[k] = coef;
        if (coef == 0) continue;
        for (std::size_t j = 0; j < o.c_.size(); ++j) rem[k + j] = field_->sub(rem[k + j], field_->mul(coef, o.c_[j]));
    }
    return {FqPoly(field_, std::move(quot)), FqPoly(field_, std::move(rem))};
}

FqPoly FqPoly::operator%(const FqPoly& o) const { return divmod(o).second; }

std::string FqPoly::to_string() const {
    if (is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (std::size_t i = c_.size(); i-- > 0;) {
        if (c_[i] == 0) continue;
        if (!first) out << " + ";
        first = false;
        if (c_[i] != 1 || i == 0) out << c_[i] << (i ? "*" : "");
        if (i >= 1) out << 'x';
        if (i >= 2) out << '^' << i;
    }
    return out.str();
}

FqPoly gcd(const FqPoly& a, const FqPoly& b) {
    FqPoly x = a, y = b;
    while (!y.is_zero()) {
        FqPoly r = x % y;
        x = std::move(y);
        y = std::move(r);
    }
    return x.monic();
}

std::uint32_t binomial_mod(std::uint64_t m, std::uint64_t k, std::uint32_t p) {
    if (k > m) return 0;
    std::uint64_t result = 1;
    while (k > 0 || m > 0) {
        const std::uint64_t md = m % p, kd = k % p;
        if (kd > md) return 0;
        // binom(md, kd) mod p with md < p: multiplicative formula.
        std::uint64_t num = 1, den = 1;
        for (std::uint64_t t = 0; t < kd; ++t) {
            num = num * ((md - t) % p) % p;
            den = den * ((t + 1) % p) % p;
        }
        result = result * num % p * pow_mod32(den, p - 2, p) % p;
        m /= p;
        k /= p;
    }
    return static_cast<std::uint32_t>(result);
}

FqPoly hasse_derivative(const FqPoly& f, int i) {
    if (i < 1 || i > f.degree()) throw std::invalid_argument("hasse_derivative: order must lie in [1, deg f]");
    const auto& c = f.coefficients();
    const auto& field = f.field();
    std::vector<FqPoly::Elem> out(c.size() - static_cast<std::size_t>(i), 0);
    for (std::size_t m = static_cast<std::size_t>(i); m < c.size(); ++m) {
        const auto b = binomial_mod(m, static_cast<std::uint64_t>(i), field.characteristic());
        out[m - static_cast<std::size_t>(i)] = field.mul(field.from_int(b), c[m]);
    }
    return FqPoly(f.field_ptr(), std::move(out));
}

std::vector<Integer> hasse_derivative(const std::vector<Integer>& f, int i) {
    if (i < 0) throw std::invalid_argument("hasse_derivative: negative order");
    std::vector<Integer> out;
    for (std::size_t m = static_cast<std::size_t>(i); m < f.size(); ++m)
        out.push_back(binomial(static_cast<long>(m), i) * f[m]);
    return out;
}

std::vector<Integer> formal_derivative(const std::vector<Integer>& f) {
    std::vector<Integer> out;
    for (std::size_t m = 1; m < f.size(); ++m) out.push_back(Integer(static_cast<unsigned long>(m)) * f[m]);
    return out;
}

bool is_casas_alvero(const FqPoly& f) {
    if (f.degree() < 1 || !f.is_monic()) throw std::invalid_argument("is_casas_alvero: f must be monic and non-constant");
    for (int i = 1; i < f.degree(); ++i) {
        FqPoly h = hasse_derivative(f, i);
        if (h.is_zero()) continue;
        if (gcd(f, h).degree() < 1) return false;
    }
    return true;
}

FqPoly linear_power(std::shared_ptr<const GaloisField> field, GaloisField::Elem b, int n) {
    FqPoly lin(field, {field->neg(b), field->one()});
    FqPoly r(field, {field->one()});
    for (int k = 0; k < n; ++k) r = r * lin;
    return r;
}

SearchBudgetExceeded::SearchBudgetExceeded(Integer required, std::uint64_t budget)
    : std::runtime_error("search needs " + required.get_str() + " candidates, budget is " + std::to_string(budget)),
      required_(std::move(required)) {}

SearchResult search_counterexamples(int n, std::uint32_t p, std::uint32_t k, std::uint64_t budget, Exec exec) {
    if (n < 2) throw std::invalid_argument("search_counterexamples: degree must be at least 2");
    auto field = std::make_shared<const GaloisField>(p, k);
    const std::uint32_t q = field->order();
    Integer total_big;
    mpz_ui_pow_ui(total_big.get_mpz_t(), q, static_cast<unsigned long>(n));
    if (total_big > budget) throw SearchBudgetExceeded(total_big, budget);
    const std::uint64_t total = total_big.get_ui();

    std::set<std::vector<GaloisField::Elem>> powers;
    for (std::uint32_t b = 0; b < q; ++b) powers.insert(linear_power(field, b, n).coefficients());

    const int threads = exec == Exec::parallel ? omp_get_max_threads() : 1;
    std::vector<std::vector<std::vector<GaloisField::Elem>>> found(static_cast<std::size_t>(threads));

#pragma omp parallel num_threads(threads)
    {
        auto& mine = found[static_cast<std::size_t>(omp_get_thread_num())];
        std::vector<GaloisField::Elem> c(static_cast<std::size_t>(n) + 1, 0);
        c[static_cast<std::size_t>(n)] = 1;
#pragma omp for schedule(dynamic, 4096)
        for (std::uint64_t idx = 0; idx < total; ++idx) {
            std::uint64_t rest = idx;
            for (int e = 0; e < n; ++e) {
                c[static_cast<std::size_t>(e)] = static_cast<GaloisField::Elem>(rest % q);
                rest /= q;
            }
            FqPoly f(field, c);
            if (is_casas_alvero(f) && !powers.contains(f.coefficients())) mine.push_back(f.coefficients());
        }
    }

    std::vector<std::vector<GaloisField::Elem>> all;
    for (auto& v : found) all.insert(all.end(), v.begin(), v.end());
    std::vector<std::vector<GaloisField::Elem>> keys;
    for (auto& c : all) keys.emplace_back(c.rbegin(), c.rend());
    std::sort(keys.begin(), keys.end());

    SearchResult res;
    res.n = n;
    res.p = p;
    res.k = k;
    res.q = q;
    res.modulus = field->modulus();
    res.searched = total;
    for (auto& key : keys) res.witnesses.emplace_back(field, std::vector<GaloisField::Elem>(key.rbegin(), key.rend()));
    return res;
}

nlohmann::ordered_json to_json(const SearchResult& result) {
    nlohmann::ordered_json j;
    j["n"] = result.n;
    j["p"] = result.p;
    j["k"] = result.k;
    j["q"] = result.q;
    j["modulus"] = std::vector<std::uint32_t>(result.modulus.rbegin(), result.modulus.rend());
    j["searched"] = result.searched;
    auto w = nlohmann::ordered_json::array();
    for (const auto& f : result.witnesses) w.push_back(f.high_first());
    j["witnesses"] = std::move(w);
    return j;
}

}  // namespace caprimes
