#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace hyperspline {

// Row-major 3x3 matrix over an arbitrary commutative ring scalar. Used with
// double for numeric work and AlgebraicNumber for the exact group matrices.
template <class T>
struct Mat3 {
    std::array<T, 9> m{};

    static Mat3 identity() {
        Mat3 r;
        r(0, 0) = T(1);
        r(1, 1) = T(1);
        r(2, 2) = T(1);
        return r;
    }

    T& operator()(int i, int j) { return m[static_cast<size_t>(3 * i + j)]; }
    const T& operator()(int i, int j) const { return m[static_cast<size_t>(3 * i + j)]; }

    friend bool operator==(const Mat3&, const Mat3&) = default;

    friend Mat3 operator*(const Mat3& a, const Mat3& b) {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                T s = a(i, 0) * b(0, j);
                s += a(i, 1) * b(1, j);
                s += a(i, 2) * b(2, j);
                r(i, j) = s;
            }
        return r;
    }

    Mat3 transpose() const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
        return r;
    }

    T det() const {
        const Mat3& a = *this;
        return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
               a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
               a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
    }

    // Adjugate: inverse times det. Exact for ring scalars; callers divide by
    // det when they need the true inverse.
    Mat3 adjugate() const {
        const Mat3& a = *this;
        Mat3 r;
        r(0, 0) = a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1);
        r(0, 1) = a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2);
        r(0, 2) = a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1);
        r(1, 0) = a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2);
        r(1, 1) = a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0);
        r(1, 2) = a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2);
        r(2, 0) = a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0);
        r(2, 1) = a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1);
        r(2, 2) = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
        return r;
    }

    std::array<T, 3> apply(const std::array<T, 3>& v) const {
        const Mat3& a = *this;
        return {a(0, 0) * v[0] + a(0, 1) * v[1] + a(0, 2) * v[2],
                a(1, 0) * v[0] + a(1, 1) * v[1] + a(1, 2) * v[2],
                a(2, 0) * v[0] + a(2, 1) * v[1] + a(2, 2) * v[2]};
    }
};

}  // namespace hyperspline
