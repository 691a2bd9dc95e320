#include "feynmat/polynomial.hpp"

#include <algorithm>
#include <sstream>

namespace feynmat {

Monomial::Monomial(std::vector<unsigned> exps) : e_(std::move(exps)) { trim(); }

Monomial Monomial::var(std::size_t i, unsigned power) {
    std::vector<unsigned> e(i + 1, 0);
    e[i] = power;
    return Monomial(std::move(e));
}

void Monomial::trim() {
    while (!e_.empty() && e_.back() == 0) e_.pop_back();
    deg_ = 0;
    for (auto x : e_) deg_ += x;
}

bool Monomial::divides(const Monomial& o) const {
    if (e_.size() > o.e_.size()) return false;
    for (std::size_t i = 0; i < e_.size(); ++i)
        if (e_[i] > o.e_[i]) return false;
    return true;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
    std::vector<unsigned> e(std::max(a.e_.size(), b.e_.size()), 0);
    for (std::size_t i = 0; i < a.e_.size(); ++i) e[i] += a.e_[i];
    for (std::size_t i = 0; i < b.e_.size(); ++i) e[i] += b.e_[i];
    Monomial m;
    m.e_ = std::move(e);
    m.deg_ = a.deg_ + b.deg_;
    return m;
}

Monomial operator/(const Monomial& a, const Monomial& b) {
    std::vector<unsigned> e = a.e_;
    for (std::size_t i = 0; i < b.e_.size(); ++i) e[i] -= b.e_[i];
    return Monomial(std::move(e));
}

bool GrlexGreater::operator()(const Monomial& a, const Monomial& b) const {
    if (a.degree() != b.degree()) return a.degree() > b.degree();
    const std::size_t n = std::max(a.exponents().size(), b.exponents().size());
    for (std::size_t i = 0; i < n; ++i)
        if (a[i] != b[i]) return a[i] > b[i];
    return false;
}

Polynomial::Polynomial(const Rational& c) {
    if (c != 0) terms_.emplace(Monomial(), c);
}

Polynomial::Polynomial(const Monomial& m, const Rational& c) {
    if (c != 0) terms_.emplace(m, c);
}

Rational Polynomial::coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

const Monomial& Polynomial::leading_monomial() const {
    if (terms_.empty()) throw DomainError("leading monomial of the zero polynomial");
    return terms_.begin()->first;
}

const Rational& Polynomial::leading_coefficient() const {
    if (terms_.empty()) throw DomainError("leading coefficient of the zero polynomial");
    return terms_.begin()->second;
}

int Polynomial::degree() const { return terms_.empty() ? -1 : static_cast<int>(terms_.begin()->first.degree()); }

bool Polynomial::is_homogeneous() const {
    for (const auto& [m, c] : terms_)
        if (m.degree() != terms_.begin()->first.degree()) return false;
    return true;
}

bool Polynomial::is_homogeneous_in(std::size_t first, std::size_t last, unsigned* degree) const {
    bool have = false;
    unsigned d0 = 0;
    for (const auto& [m, c] : terms_) {
        unsigned d = 0;
        for (std::size_t i = first; i < last; ++i) d += m[i];
        if (!have) {
            d0 = d;
            have = true;
        } else if (d != d0) {
            return false;
        }
    }
    if (degree) *degree = d0;
    return true;
}

std::size_t Polynomial::max_variable() const {
    std::size_t n = 0;
    for (const auto& [m, c] : terms_) n = std::max(n, m.exponents().size());
    return n;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& o) { return *this = *this * o; }

Polynomial Polynomial::operator-() const {
    Polynomial p = *this;
    for (auto& [m, c] : p.terms_) c = -c;
    return p;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial out;
    if (a.terms_.empty() || b.terms_.empty()) return out;
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) out.add_term(ma * mb, ca * cb);
    return out;
}

Polynomial operator/(const Polynomial& a, const Polynomial& b) {
    if (b.terms_.empty()) throw DomainError("polynomial division by zero");
    if (b.terms_.size() == 1) {
        // Monomial divisor: divide term by term.
        const auto& [mb, cb] = *b.terms_.begin();
        Polynomial q;
        for (const auto& [ma, ca] : a.terms_) {
            if (!mb.divides(ma)) throw IntegrityError("inexact polynomial division");
            q.terms_.emplace_hint(q.terms_.end(), ma / mb, ca / cb);
        }
        return q;
    }
    const Monomial& lb = b.leading_monomial();
    const Rational& lc = b.leading_coefficient();
    Polynomial r = a, q;
    while (!r.terms_.empty()) {
        const auto [mr, cr] = *r.terms_.begin();
        if (!lb.divides(mr)) throw IntegrityError("inexact polynomial division");
        const Polynomial t(mr / lb, cr / lc);
        q += t;
        r -= t * b;
    }
    return q;
}

Polynomial Polynomial::pow(unsigned k) const {
    Polynomial out(1), base = *this;
    while (k) {
        if (k & 1U) out *= base;
        k >>= 1U;
        if (k) base *= base;
    }
    return out;
}

Polynomial Polynomial::substitute(std::size_t v, const Polynomial& p) const {
    Polynomial out;
    std::map<unsigned, Polynomial> powers;
    for (const auto& [m, c] : terms_) {
        const unsigned k = m[v];
        if (k == 0) {
            out.add_term(m, c);
            continue;
        }
        std::vector<unsigned> rest = m.exponents();
        rest[v] = 0;
        auto it = powers.find(k);
        if (it == powers.end()) it = powers.emplace(k, p.pow(k)).first;
        out += Polynomial(Monomial(std::move(rest)), c) * it->second;
    }
    return out;
}

namespace {

std::string var_power(const std::vector<std::string>& names, std::size_t i, unsigned e) {
    std::string s = i < names.size() ? names[i] : "x" + std::to_string(i);
    if (e > 1) s += "^" + std::to_string(e);
    return s;
}

}  // namespace

std::string term_line(const Monomial& m, const Rational& c, const std::vector<std::string>& names) {
    std::string s = to_string(c);
    if (m.is_one()) return s;
    s += " *";
    for (std::size_t i = 0; i < m.exponents().size(); ++i)
        if (m[i]) s += " " + var_power(names, i, m[i]);
    return s;
}

std::vector<std::string> term_lines(const Polynomial& p, const std::vector<std::string>& names) {
    std::vector<std::string> out;
    for (const auto& [m, c] : p.terms()) out.push_back(term_line(m, c, names));
    return out;
}

std::string to_string(const Polynomial& p, const std::vector<std::string>& names) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : p.terms()) {
        Rational mag = c < 0 ? Rational(-c) : c;
        if (first)
            os << (c < 0 ? "-" : "");
        else
            os << (c < 0 ? " - " : " + ");
        first = false;
        std::string factors;
        for (std::size_t i = 0; i < m.exponents().size(); ++i)
            if (m[i]) factors += (factors.empty() ? "" : "*") + var_power(names, i, m[i]);
        if (factors.empty())
            os << to_string(mag);
        else if (mag == 1)
            os << factors;
        else
            os << to_string(mag) << "*" << factors;
    }
    return os.str();
}

Polynomial rename_variables(const Polynomial& p, const std::vector<std::string>& from,
                            const std::vector<std::string>& to) {
    std::vector<std::size_t> map(from.size());
    for (std::size_t i = 0; i < from.size(); ++i) {
        auto it = std::find(to.begin(), to.end(), from[i]);
        if (it == to.end()) throw LookupError("variable '" + from[i] + "' has no counterpart");
        map[i] = static_cast<std::size_t>(it - to.begin());
    }
    Polynomial out;
    for (const auto& [m, c] : p.terms()) {
        std::vector<unsigned> e(to.size(), 0);
        for (std::size_t i = 0; i < m.exponents().size(); ++i) {
            if (m.exponents()[i] == 0) continue;
            if (i >= map.size()) throw LookupError("variable index " + std::to_string(i) + " has no name");
            e[map[i]] += m.exponents()[i];
        }
        out.add_term(Monomial(std::move(e)), c);
    }
    return out;
}

}  // namespace feynmat
