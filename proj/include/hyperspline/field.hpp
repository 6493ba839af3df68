#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hyperspline/errors.hpp"

namespace hyperspline {

using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Element of the quartic field Q(beta), beta = sqrt(1 + sqrt(2)), stored as
// c0 + c1*beta + c2*beta^2 + c3*beta^3 with rational coefficients. Arithmetic
// reduces modulo the minimal polynomial beta^4 - 2*beta^2 - 1 = 0, so values
// stay in canonical form and equality is plain coefficient comparison.
// sqrt(2) embeds as beta^2 - 1.
class AlgebraicNumber {
public:
    AlgebraicNumber() = default;
    AlgebraicNumber(int v) : c_{Rational(v), 0, 0, 0} {}            // NOLINT(google-explicit-constructor)
    AlgebraicNumber(long long v) : c_{Rational(v), 0, 0, 0} {}      // NOLINT(google-explicit-constructor)
    AlgebraicNumber(Rational v) : c_{std::move(v), 0, 0, 0} {}      // NOLINT(google-explicit-constructor)
    AlgebraicNumber(Rational c0, Rational c1, Rational c2, Rational c3)
        : c_{std::move(c0), std::move(c1), std::move(c2), std::move(c3)} {}

    static AlgebraicNumber beta() { return {0, 1, 0, 0}; }
    static AlgebraicNumber sqrt2() { return {-1, 0, 1, 0}; }

    const Rational& coeff(int i) const { return c_[static_cast<size_t>(i)]; }

    bool is_zero() const { return c_[0] == 0 && c_[1] == 0 && c_[2] == 0 && c_[3] == 0; }
    bool is_one() const { return c_[0] == 1 && c_[1] == 0 && c_[2] == 0 && c_[3] == 0; }
    bool is_rational() const { return c_[1] == 0 && c_[2] == 0 && c_[3] == 0; }

    friend bool operator==(const AlgebraicNumber& a, const AlgebraicNumber& b) = default;

    friend AlgebraicNumber operator+(const AlgebraicNumber& a, const AlgebraicNumber& b) {
        return {a.c_[0] + b.c_[0], a.c_[1] + b.c_[1], a.c_[2] + b.c_[2], a.c_[3] + b.c_[3]};
    }
    friend AlgebraicNumber operator-(const AlgebraicNumber& a, const AlgebraicNumber& b) {
        return {a.c_[0] - b.c_[0], a.c_[1] - b.c_[1], a.c_[2] - b.c_[2], a.c_[3] - b.c_[3]};
    }
    friend AlgebraicNumber operator-(const AlgebraicNumber& a) {
        return {-a.c_[0], -a.c_[1], -a.c_[2], -a.c_[3]};
    }

    friend AlgebraicNumber operator*(const AlgebraicNumber& a, const AlgebraicNumber& b) {
        // Convolution to degree 6, then fold with beta^4 = 2 beta^2 + 1,
        // beta^5 = 2 beta^3 + beta, beta^6 = 5 beta^2 + 2.
        std::array<Rational, 7> p{};
        for (size_t i = 0; i < 4; ++i) {
            if (a.c_[i] == 0) continue;
            for (size_t j = 0; j < 4; ++j) {
                if (b.c_[j] == 0) continue;
                p[i + j] += a.c_[i] * b.c_[j];
            }
        }
        return {p[0] + p[4] + 2 * p[6],
                p[1] + p[5],
                p[2] + 2 * p[4] + 5 * p[6],
                p[3] + 2 * p[5]};
    }

    AlgebraicNumber inverse() const;

    friend AlgebraicNumber operator/(const AlgebraicNumber& a, const AlgebraicNumber& b) {
        return a * b.inverse();
    }

    AlgebraicNumber& operator+=(const AlgebraicNumber& o) { return *this = *this + o; }
    AlgebraicNumber& operator-=(const AlgebraicNumber& o) { return *this = *this - o; }
    AlgebraicNumber& operator*=(const AlgebraicNumber& o) { return *this = *this * o; }
    AlgebraicNumber& operator/=(const AlgebraicNumber& o) { return *this = *this / o; }

    double to_double() const {
        static const double b = std::sqrt(1.0 + std::sqrt(2.0));
        return hyperspline::to_double(c_[0]) +
               b * (hyperspline::to_double(c_[1]) +
                    b * (hyperspline::to_double(c_[2]) + b * hyperspline::to_double(c_[3])));
    }

    std::string str() const;

private:
    std::array<Rational, 4> c_{};
};

namespace detail {

// Minimal univariate polynomial arithmetic over Q, just enough for the
// extended Euclidean inverse in Q[x]/(x^4 - 2x^2 - 1).
using QPoly = std::vector<Rational>;

inline int qp_degree(const QPoly& p) {
    for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
        if (p[static_cast<size_t>(i)] != 0) return i;
    return -1;
}

inline QPoly qp_sub(const QPoly& a, const QPoly& b) {
    QPoly r(std::max(a.size(), b.size()));
    for (size_t i = 0; i < r.size(); ++i) {
        if (i < a.size()) r[i] += a[i];
        if (i < b.size()) r[i] -= b[i];
    }
    return r;
}

inline QPoly qp_mul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly r(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    return r;
}

// Long division: returns quotient, replaces a with the remainder.
inline QPoly qp_divmod(QPoly& a, const QPoly& d) {
    const int dd = qp_degree(d);
    QPoly q;
    int da = qp_degree(a);
    if (da >= dd) q.assign(static_cast<size_t>(da - dd) + 1, Rational(0));
    while ((da = qp_degree(a)) >= dd) {
        Rational f = a[static_cast<size_t>(da)] / d[static_cast<size_t>(dd)];
        q[static_cast<size_t>(da - dd)] = f;
        for (int i = 0; i <= dd; ++i)
            a[static_cast<size_t>(da - dd + i)] -= f * d[static_cast<size_t>(i)];
    }
    return q;
}

}  // namespace detail

// Extended Euclid against the minimal polynomial. Every nonzero element is
// invertible because x^4 - 2x^2 - 1 is irreducible over Q.
inline AlgebraicNumber AlgebraicNumber::inverse() const {
    if (is_zero()) throw ValidationError("AlgebraicNumber: division by zero");
    using detail::QPoly;
    QPoly r0 = {-1, 0, -2, 0, 1};  // x^4 - 2x^2 - 1
    QPoly r1 = {c_[0], c_[1], c_[2], c_[3]};
    QPoly t0 = {};
    QPoly t1 = {1};
    while (detail::qp_degree(r1) > 0) {
        QPoly rem = r0;
        QPoly q = detail::qp_divmod(rem, r1);
        r0 = std::move(r1);
        r1 = std::move(rem);
        QPoly tn = detail::qp_sub(t0, detail::qp_mul(q, t1));
        t0 = std::move(t1);
        t1 = std::move(tn);
    }
    // gcd is a nonzero constant; scale the Bezout coefficient by it.
    const Rational g = r1[0];
    std::array<Rational, 4> out{};
    for (size_t i = 0; i < t1.size() && i < 4; ++i) out[i] = t1[i] / g;
    return {out[0], out[1], out[2], out[3]};
}

inline std::string rational_str(const Rational& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

inline Rational rational_from_str(const std::string& s) {
    try {
        return Rational(s);
    } catch (const std::exception&) {
        throw ValidationError("malformed rational literal: " + s);
    }
}

inline std::string AlgebraicNumber::str() const {
    return rational_str(c_[0]) + "," + rational_str(c_[1]) + "," + rational_str(c_[2]) + "," +
           rational_str(c_[3]);
}

// Complex number over Q(beta), used for the SU(1,1) matrices [[a, b], [~b, ~a]].
struct FieldComplex {
    AlgebraicNumber re, im;

    FieldComplex() = default;
    FieldComplex(AlgebraicNumber r, AlgebraicNumber i) : re(std::move(r)), im(std::move(i)) {}

    FieldComplex conj() const { return {re, -im}; }
    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    AlgebraicNumber norm() const { return re * re + im * im; }

    friend bool operator==(const FieldComplex&, const FieldComplex&) = default;
    friend FieldComplex operator+(const FieldComplex& a, const FieldComplex& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend FieldComplex operator-(const FieldComplex& a, const FieldComplex& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend FieldComplex operator-(const FieldComplex& a) { return {-a.re, -a.im}; }
    friend FieldComplex operator*(const FieldComplex& a, const FieldComplex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
};

}  // namespace hyperspline
