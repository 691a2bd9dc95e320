#pragma once

#include <cstdint>
#include <ostream>
#include <string>

#include <Eigen/Core>
#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/eigen.hpp>

#include "feynmat/errors.hpp"

namespace feynmat {

// Exact rationals.  Expression templates are disabled so that `auto` and Eigen
// temporaries always hold values.
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                              boost::multiprecision::et_off>;

enum class Field { Q, F2, F3 };

std::string to_string(Field f);
Field parse_field(const std::string& s);

/// Residue class modulo a small prime.
template <int P>
class Fp {
    static_assert(P == 2 || P == 3, "only GF(2) and GF(3) are supported");

public:
    static constexpr int modulus = P;

    constexpr Fp() = default;
    constexpr Fp(long long v) : residue_(static_cast<int>(((v % P) + P) % P)) {}

    constexpr int residue() const { return residue_; }

    friend constexpr Fp operator+(Fp a, Fp b) { return Fp(a.residue_ + b.residue_); }
    friend constexpr Fp operator-(Fp a, Fp b) { return Fp(a.residue_ - b.residue_); }
    friend constexpr Fp operator*(Fp a, Fp b) { return Fp(a.residue_ * b.residue_); }
    friend Fp operator/(Fp a, Fp b) {
        if (b.residue_ == 0) throw DomainError("division by zero in GF(" + std::to_string(P) + ")");
        // Every nonzero element of GF(2) and GF(3) is its own inverse.
        return a * b;
    }
    constexpr Fp operator-() const { return Fp(-residue_); }
    Fp& operator+=(Fp o) { return *this = *this + o; }
    Fp& operator-=(Fp o) { return *this = *this - o; }
    Fp& operator*=(Fp o) { return *this = *this * o; }
    Fp& operator/=(Fp o) { return *this = *this / o; }

    friend constexpr bool operator==(Fp a, Fp b) { return a.residue_ == b.residue_; }
    friend constexpr bool operator!=(Fp a, Fp b) { return a.residue_ != b.residue_; }

    friend std::ostream& operator<<(std::ostream& os, Fp a) { return os << a.residue_; }

private:
    int residue_ = 0;
};

using F2 = Fp<2>;
using F3 = Fp<3>;

template <class S>
struct scalar_field;
template <>
struct scalar_field<Rational> {
    static constexpr Field value = Field::Q;
};
template <>
struct scalar_field<F2> {
    static constexpr Field value = Field::F2;
};
template <>
struct scalar_field<F3> {
    static constexpr Field value = Field::F3;
};

template <class S>
bool is_zero(const S& s) {
    return s == S(0);
}

/// How expensive an entry is as an elimination pivot; smaller is better.
template <class S>
std::size_t pivot_cost(const S&) {
    return 0;
}

std::string to_string(const Rational& q);
template <int P>
std::string to_string(Fp<P> x) {
    return std::to_string(x.residue());
}

/// Parses "n" or "n/d".
Rational parse_rational(const std::string& s);

/// True iff q is an integer; `out` receives it when it fits in 64 bits.
bool to_int64(const Rational& q, long long& out);

}  // namespace feynmat

namespace Eigen {

template <int P>
struct NumTraits<feynmat::Fp<P>> : GenericNumTraits<feynmat::Fp<P>> {
    using Real = feynmat::Fp<P>;
    using NonInteger = feynmat::Fp<P>;
    using Nested = feynmat::Fp<P>;
    using Literal = feynmat::Fp<P>;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 0,
        RequireInitialization = 1,
        ReadCost = 1,
        AddCost = 1,
        MulCost = 1
    };
    static inline Real epsilon() { return Real(0); }
    static inline Real dummy_precision() { return Real(0); }
    static inline int digits10() { return 0; }
};

}  // namespace Eigen
