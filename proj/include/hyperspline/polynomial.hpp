#pragma once

#include <cmath>
#include <vector>

#include "hyperspline/errors.hpp"
#include "hyperspline/line_form.hpp"

namespace hyperspline {

// Dense bivariate polynomial of fixed total degree, coefficients over the
// monomials x^i y^j with i + j <= n in graded-lex order: blocks by total
// degree, highest x power first within a block (1; x, y; x^2, xy, y^2; ...).
class BivariatePolynomial {
public:
    explicit BivariatePolynomial(int degree = 0)
        : degree_(degree), c_(static_cast<size_t>(coeff_count(degree)), 0.0) {
        if (degree < 0) throw ValidationError("BivariatePolynomial: negative degree");
    }

    static int coeff_count(int degree) { return (degree + 1) * (degree + 2) / 2; }

    // Position of x^i y^j: block offset of degree d = i + j, then j.
    static int index(int i, int j) {
        const int d = i + j;
        return d * (d + 1) / 2 + j;
    }

    static BivariatePolynomial constant(double v) {
        BivariatePolynomial p(0);
        p.c_[0] = v;
        return p;
    }

    static BivariatePolynomial monomial(int i, int j, double v = 1.0) {
        BivariatePolynomial p(i + j);
        p.at(i, j) = v;
        return p;
    }

    int degree() const { return degree_; }
    const std::vector<double>& coeffs() const { return c_; }
    std::vector<double>& coeffs() { return c_; }

    double coeff(int i, int j) const {
        if (i < 0 || j < 0 || i + j > degree_) return 0.0;
        return c_[static_cast<size_t>(index(i, j))];
    }
    double& at(int i, int j) { return c_[static_cast<size_t>(index(i, j))]; }

    // Horner in x of inner Horner evaluations in y.
    double eval(double x, double y) const {
        double acc = 0.0;
        for (int i = degree_; i >= 0; --i) {
            double ay = 0.0;
            for (int j = degree_ - i; j >= 0; --j) ay = ay * y + coeff(i, j);
            acc = acc * x + ay;
        }
        return acc;
    }

    BivariatePolynomial resized(int degree) const {
        BivariatePolynomial r(degree);
        for (int i = 0; i <= degree_; ++i)
            for (int j = 0; i + j <= degree_; ++j)
                if (i + j <= degree) r.at(i, j) = coeff(i, j);
        return r;
    }

    friend BivariatePolynomial operator+(const BivariatePolynomial& a, const BivariatePolynomial& b) {
        BivariatePolynomial r(std::max(a.degree_, b.degree_));
        for (int i = 0; i <= r.degree_; ++i)
            for (int j = 0; i + j <= r.degree_; ++j) r.at(i, j) = a.coeff(i, j) + b.coeff(i, j);
        return r;
    }
    friend BivariatePolynomial operator-(const BivariatePolynomial& a, const BivariatePolynomial& b) {
        BivariatePolynomial r(std::max(a.degree_, b.degree_));
        for (int i = 0; i <= r.degree_; ++i)
            for (int j = 0; i + j <= r.degree_; ++j) r.at(i, j) = a.coeff(i, j) - b.coeff(i, j);
        return r;
    }
    friend BivariatePolynomial operator*(double s, const BivariatePolynomial& p) {
        BivariatePolynomial r = p;
        for (double& v : r.c_) v *= s;
        return r;
    }
    friend BivariatePolynomial operator*(const BivariatePolynomial& a, const BivariatePolynomial& b) {
        BivariatePolynomial r(a.degree_ + b.degree_);
        for (int i = 0; i <= a.degree_; ++i)
            for (int j = 0; i + j <= a.degree_; ++j) {
                const double ca = a.coeff(i, j);
                if (ca == 0.0) continue;
                for (int k = 0; k <= b.degree_; ++k)
                    for (int l = 0; k + l <= b.degree_; ++l)
                        r.at(i + k, j + l) += ca * b.coeff(k, l);
            }
        return r;
    }

    double max_abs_coeff() const {
        double m = 0.0;
        for (double v : c_) m = std::max(m, std::abs(v));
        return m;
    }

private:
    int degree_;
    std::vector<double> c_;
};

// Substitute two degree-1 polynomials for x and y; the result has the same
// total degree. Powers are cached, so the cost is quadratic in the monomial
// count.
inline BivariatePolynomial compose_linear(const BivariatePolynomial& p,
                                          const BivariatePolynomial& fx,
                                          const BivariatePolynomial& fy) {
    const int n = p.degree();
    std::vector<BivariatePolynomial> px(static_cast<size_t>(n) + 1), py(static_cast<size_t>(n) + 1);
    px[0] = BivariatePolynomial::constant(1.0);
    py[0] = BivariatePolynomial::constant(1.0);
    for (int i = 1; i <= n; ++i) {
        px[static_cast<size_t>(i)] = px[static_cast<size_t>(i - 1)] * fx;
        py[static_cast<size_t>(i)] = py[static_cast<size_t>(i - 1)] * fy;
    }
    BivariatePolynomial r(n);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; i + j <= n; ++j) {
            const double c = p.coeff(i, j);
            if (c == 0.0) continue;
            r = r + c * (px[static_cast<size_t>(i)] * py[static_cast<size_t>(j)]).resized(n);
        }
    return r;
}

inline BivariatePolynomial linear_poly(double cx, double cy, double c0) {
    BivariatePolynomial p(1);
    p.at(1, 0) = cx;
    p.at(0, 1) = cy;
    p.at(0, 0) = c0;
    return p;
}

// Rotate/translate into the frame of a line: xt = a x + b y + c is the signed
// distance to the line, yt = -b x + a y the coordinate along it. to_line_frame
// returns pt with pt(xt, yt) = p(x, y).
inline BivariatePolynomial to_line_frame(const BivariatePolynomial& p, const LineForm& l) {
    // Inverse map: x = a (xt - c) - b yt, y = b (xt - c) + a yt.
    return compose_linear(p, linear_poly(l.a, -l.b, -l.a * l.c), linear_poly(l.b, l.a, -l.b * l.c));
}

inline BivariatePolynomial from_line_frame(const BivariatePolynomial& p, const LineForm& l) {
    return compose_linear(p, linear_poly(l.a, l.b, l.c), linear_poly(-l.b, l.a, 0.0));
}

}  // namespace hyperspline
