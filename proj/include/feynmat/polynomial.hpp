#pragma once

#include <map>
#include <string>
#include <vector>

#include "feynmat/scalar.hpp"

namespace feynmat {

/// Exponent vector over the fixed variable order, trailing zeros trimmed so
/// that equal monomials compare equal regardless of how many variables a
/// context declares.
class Monomial {
public:
    Monomial() = default;
    explicit Monomial(std::vector<unsigned> exps);
    static Monomial var(std::size_t i, unsigned power = 1);

    const std::vector<unsigned>& exponents() const { return e_; }
    unsigned operator[](std::size_t i) const { return i < e_.size() ? e_[i] : 0; }
    unsigned degree() const { return deg_; }
    bool is_one() const { return e_.empty(); }
    bool divides(const Monomial& o) const;

    friend Monomial operator*(const Monomial& a, const Monomial& b);
    /// Requires b | a.
    friend Monomial operator/(const Monomial& a, const Monomial& b);
    friend bool operator==(const Monomial& a, const Monomial& b) { return a.e_ == b.e_; }
    friend bool operator!=(const Monomial& a, const Monomial& b) { return a.e_ != b.e_; }

private:
    void trim();
    std::vector<unsigned> e_;
    unsigned deg_ = 0;
};

/// Graded lexicographic order, largest first: higher total degree wins, ties
/// broken by the exponent of the lowest-indexed variable where they differ.
struct GrlexGreater {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

/// Sparse multivariate polynomial with rational coefficients.  Variables are
/// indices into a caller-owned name table.
class Polynomial {
public:
    using Terms = std::map<Monomial, Rational, GrlexGreater>;

    Polynomial() = default;
    Polynomial(int c) : Polynomial(Rational(c)) {}
    Polynomial(long long c) : Polynomial(Rational(c)) {}
    Polynomial(const Rational& c);
    Polynomial(const Monomial& m, const Rational& c = 1);
    static Polynomial var(std::size_t i) { return Polynomial(Monomial::var(i)); }

    const Terms& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    /// Coefficient of m (zero if absent).
    Rational coefficient(const Monomial& m) const;
    const Monomial& leading_monomial() const;
    const Rational& leading_coefficient() const;

    /// Maximum total degree; -1 for the zero polynomial.
    int degree() const;
    bool is_homogeneous() const;
    /// Total degree restricted to the variables in [first, last).
    bool is_homogeneous_in(std::size_t first, std::size_t last, unsigned* degree = nullptr) const;
    std::size_t max_variable() const;

    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial& operator*=(const Polynomial& o);
    Polynomial& operator/=(const Polynomial& o) { return *this = *this / o; }
    Polynomial operator-() const;

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    /// Exact division; throws IntegrityError if b does not divide a.
    friend Polynomial operator/(const Polynomial& a, const Polynomial& b);
    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    void add_term(const Monomial& m, const Rational& c);
    Polynomial pow(unsigned k) const;
    /// Replace variable v by p everywhere.
    Polynomial substitute(std::size_t v, const Polynomial& p) const;

private:
    Terms terms_;
};

template <>
inline bool is_zero<Polynomial>(const Polynomial& p) {
    return p.is_zero();
}

// constants first, then short low-degree entries
template <>
inline std::size_t pivot_cost<Polynomial>(const Polynomial& p) {
    return p.size() * static_cast<std::size_t>(p.degree() + 1);
}

// Text forms.  `names[i]` is the display name of variable i.

/// "coef * x y^2" for one term.
std::string term_line(const Monomial& m, const Rational& c, const std::vector<std::string>& names);
/// One line per term in grlex order.
std::vector<std::string> term_lines(const Polynomial& p, const std::vector<std::string>& names);
/// Expanded single-line sum, e.g. "a*c + a*d - 1/2*b^2".
std::string to_string(const Polynomial& p, const std::vector<std::string>& names);

/// Re-index variables: variable i under `from` becomes the variable with the
/// same name under `to`.  Throws LookupError for names missing from `to`.
Polynomial rename_variables(const Polynomial& p, const std::vector<std::string>& from,
                            const std::vector<std::string>& to);

}  // namespace feynmat

namespace Eigen {

template <>
struct NumTraits<feynmat::Polynomial> : GenericNumTraits<feynmat::Polynomial> {
    using Real = feynmat::Polynomial;
    using NonInteger = feynmat::Polynomial;
    using Nested = feynmat::Polynomial;
    using Literal = feynmat::Polynomial;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 1,
        AddCost = 10,
        MulCost = 100
    };
    static inline Real epsilon() { return Real(0); }
    static inline Real dummy_precision() { return Real(0); }
    static inline int digits10() { return 0; }
};

}  // namespace Eigen
