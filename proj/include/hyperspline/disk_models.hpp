#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include "hyperspline/errors.hpp"
#include "hyperspline/field.hpp"
#include "hyperspline/mat3.hpp"

namespace hyperspline {

enum class DiskModel { Poincare, Klein };

inline const char* model_name(DiskModel m) {
    return m == DiskModel::Poincare ? "poincare" : "klein";
}

// A point of the open unit disk, tagged with the hyperbolic model it lives in.
struct DiskPoint {
    double x = 0.0;
    double y = 0.0;
    DiskModel model = DiskModel::Klein;

    double radius2() const { return x * x + y * y; }
    double radius() const { return std::sqrt(radius2()); }
    bool interior() const { return radius2() < 1.0; }
};

inline DiskPoint klein_point(double x, double y) { return {x, y, DiskModel::Klein}; }
inline DiskPoint poincare_point(double x, double y) { return {x, y, DiskModel::Poincare}; }

inline void require_model(const DiskPoint& p, DiskModel m, const char* where) {
    if (p.model != m)
        throw ValidationError(std::string(where) + ": expected a " + model_name(m) + " point");
}

// Complex numbers as plain real pairs; the library does not lean on a host
// complex type.
struct Cx {
    double re = 0.0;
    double im = 0.0;

    double abs2() const { return re * re + im * im; }
    double abs() const { return std::sqrt(abs2()); }
    Cx conj() const { return {re, -im}; }

    friend Cx operator+(Cx a, Cx b) { return {a.re + b.re, a.im + b.im}; }
    friend Cx operator-(Cx a, Cx b) { return {a.re - b.re, a.im - b.im}; }
    friend Cx operator-(Cx a) { return {-a.re, -a.im}; }
    friend Cx operator*(Cx a, Cx b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend Cx operator/(Cx a, Cx b) {
        const double n = b.abs2();
        return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
    }
};

// Poincare radius u maps to Klein radius s = 2u / (1 + u^2) along the same ray.
inline DiskPoint poincare_to_klein(const DiskPoint& p) {
    require_model(p, DiskModel::Poincare, "poincare_to_klein");
    const double f = 2.0 / (1.0 + p.radius2());
    return {f * p.x, f * p.y, DiskModel::Klein};
}

// Inverse map: u = s / (1 + sqrt(1 - s^2)), the stable form of (1 - sqrt(1-s^2))/s.
inline DiskPoint klein_to_poincare(const DiskPoint& p) {
    require_model(p, DiskModel::Klein, "klein_to_poincare");
    const double s2 = p.radius2();
    const double f = 1.0 / (1.0 + std::sqrt(std::max(0.0, 1.0 - s2)));
    return {f * p.x, f * p.y, DiskModel::Poincare};
}

// Klein geodesic: the chord u*x + v*y = r with u^2 + v^2 = 1 and 0 <= r < 1.
struct KleinChord {
    double u = 1.0;
    double v = 0.0;
    double r = 0.0;

    KleinChord() = default;
    KleinChord(double u_, double v_, double r_) : u(u_), v(v_), r(r_) { normalize(); }

    static KleinChord through(const DiskPoint& a, const DiskPoint& b) {
        require_model(a, DiskModel::Klein, "KleinChord::through");
        require_model(b, DiskModel::Klein, "KleinChord::through");
        // Normal is perpendicular to b - a.
        const double nx = b.y - a.y, ny = a.x - b.x;
        const double len = std::hypot(nx, ny);
        if (len == 0.0) throw ValidationError("KleinChord::through: coincident points");
        return {nx / len, ny / len, (nx * a.x + ny * a.y) / len};
    }

    double eval(double x, double y) const { return u * x + v * y - r; }

private:
    void normalize() {
        const double len = std::hypot(u, v);
        if (len == 0.0) throw ValidationError("KleinChord: zero normal");
        u /= len;
        v /= len;
        r /= len;
        if (r < 0.0) {
            u = -u;
            v = -v;
            r = -r;
        } else if (r == 0.0 && (u < 0.0 || (u == 0.0 && v < 0.0))) {
            u = -u;
            v = -v;
        }
    }
};

// Poincare geodesic: either the circle x^2 + y^2 + d*x + e*y + 1 = 0
// (orthogonal to the unit circle) or a diameter with unit direction.
struct PoincareGeodesic {
    bool diameter = false;
    double d = 0.0, e = 0.0;
    double dir_x = 1.0, dir_y = 0.0;

    double center_x() const { return -d / 2.0; }
    double center_y() const { return -e / 2.0; }
    double radius2() const { return d * d / 4.0 + e * e / 4.0 - 1.0; }
    double radius() const { return std::sqrt(radius2()); }

    double eval(double x, double y) const { return x * x + y * y + d * x + e * y + 1.0; }
};

// Circle orthogonal to the unit circle through two interior Poincare points.
// Falls back to the diameter when the points are collinear with the origin.
inline PoincareGeodesic poincare_geodesic(const DiskPoint& a, const DiskPoint& b,
                                          double collinear_tol = 1e-12) {
    require_model(a, DiskModel::Poincare, "poincare_geodesic");
    require_model(b, DiskModel::Poincare, "poincare_geodesic");
    const double dx = a.x - b.x, dy = a.y - b.y;
    if (dx * dx + dy * dy == 0.0) throw ValidationError("poincare_geodesic: coincident points");
    const double det = a.x * b.y - a.y * b.x;
    if (std::abs(det) <= collinear_tol) {
        PoincareGeodesic g;
        g.diameter = true;
        double nx = a.x, ny = a.y;
        if (nx == 0.0 && ny == 0.0) {
            nx = b.x;
            ny = b.y;
        }
        const double len = std::hypot(nx, ny);
        g.dir_x = nx / len;
        g.dir_y = ny / len;
        return g;
    }
    const double na = a.radius2(), nb = b.radius2();
    PoincareGeodesic g;
    g.d = (a.y * nb - b.y * na + a.y - b.y) / det;
    g.e = (b.x * na - a.x * nb + b.x - a.x) / det;
    return g;
}

// Plane inversion: P' on the ray center->P with |CP| * |CP'| = r^2.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 invert_in_circle(const Vec2& p, const Vec2& center, double r) {
    const double dx = p.x - center.x, dy = p.y - center.y;
    const double d2 = dx * dx + dy * dy;
    if (d2 == 0.0) throw ValidationError("invert_in_circle: point coincides with the center");
    const double f = r * r / d2;
    return {center.x + f * dx, center.y + f * dy};
}

// Orientation-preserving Poincare isometry T(z) = lambda (z - a) / (conj(a) z - 1),
// |lambda| = 1, |a| < 1.
struct MobiusMap {
    Cx lambda{1.0, 0.0};
    Cx a{0.0, 0.0};
};

inline Cx mobius_apply(const MobiusMap& t, Cx z) {
    const Cx den = t.a.conj() * z - Cx{1.0, 0.0};
    if (den.abs2() < 1e-30) throw ValidationError("mobius_apply: pole of the transformation");
    return t.lambda * ((z - t.a) / den);
}

// SU(1,1) form T(z) = (a z + b) / (conj(b) z + conj(a)), a*conj(a) - b*conj(b) = 1.
inline Cx su11_apply(Cx a, Cx b, Cx z) {
    const Cx den = b.conj() * z + a.conj();
    if (den.abs2() < 1e-30) throw ValidationError("su11_apply: pole of the transformation");
    return (a * z + b) / den;
}

// The two parameterizations describe the same group; convert between them.
inline std::pair<Cx, Cx> mobius_to_su11(const MobiusMap& t) {
    // lambda (z - a)/(conj(a) z - 1) = (Az + B)/(conj(B) z + conj(A)) with
    // A = lambda / c, B = -lambda a / c, c = sqrt(-lambda (1 - |a|^2)).
    const double s = 1.0 - t.a.abs2();
    if (s <= 0.0) throw ValidationError("mobius_to_su11: |a| must be < 1");
    const Cx w{-t.lambda.re * s, -t.lambda.im * s};
    const double m = w.abs();
    const double ang = std::atan2(w.im, w.re) / 2.0;
    const Cx c{std::sqrt(m) * std::cos(ang), std::sqrt(m) * std::sin(ang)};
    return {t.lambda / c, -(t.lambda * t.a) / c};
}

inline MobiusMap su11_to_mobius(Cx a, Cx b) {
    if (b.abs2() == 0.0) {
        // Pure rotation z -> (a/conj(a)) z = -lambda z with fixed point 0.
        return {-(a / a.conj()), Cx{0.0, 0.0}};
    }
    const Cx fixed_zero = -(b / a);  // T(-b/a) = 0
    const Cx lambda = -(a / a.conj());
    return {lambda, fixed_zero};
}

// Projective transformation of the Klein disk, acting on homogeneous
// coordinates. Carries an exact matrix when built from field data, plus a
// float shadow derived from it; dedup of group elements compares the exact
// form so it never depends on a tolerance.
class Collineation {
public:
    Collineation() : m_(Mat3<double>::identity()) {}
    explicit Collineation(const Mat3<double>& m) : m_(m) {}
    explicit Collineation(const Mat3<AlgebraicNumber>& e) : exact_(e) {
        for (int i = 0; i < 9; ++i) m_.m[static_cast<size_t>(i)] = e.m[static_cast<size_t>(i)].to_double();
    }

    static Collineation identity_exact() {
        return Collineation(Mat3<AlgebraicNumber>::identity());
    }

    const Mat3<double>& matrix() const { return m_; }
    bool has_exact() const { return exact_.has_value(); }
    const Mat3<AlgebraicNumber>& exact() const {
        if (!exact_) throw ValidationError("Collineation: no exact matrix available");
        return *exact_;
    }

    // x' = (m00 x + m01 y + m02) / (m20 x + m21 y + m22), same for y'.
    DiskPoint apply(const DiskPoint& p) const {
        require_model(p, DiskModel::Klein, "Collineation::apply");
        const double den = m_(2, 0) * p.x + m_(2, 1) * p.y + m_(2, 2);
        if (std::abs(den) < 1e-14)
            throw NumericError("Collineation::apply: point maps to the line at infinity");
        return klein_point((m_(0, 0) * p.x + m_(0, 1) * p.y + m_(0, 2)) / den,
                           (m_(1, 0) * p.x + m_(1, 1) * p.y + m_(1, 2)) / den);
    }

    friend Collineation operator*(const Collineation& a, const Collineation& b) {
        if (a.exact_ && b.exact_) return Collineation(*a.exact_ * *b.exact_);
        Collineation r(a.m_ * b.m_);
        return r;
    }

    Collineation inverse() const {
        if (exact_) {
            const AlgebraicNumber d = exact_->det();
            Mat3<AlgebraicNumber> adj = exact_->adjugate();
            for (auto& v : adj.m) v = v / d;
            return Collineation(adj);
        }
        const double d = m_.det();
        if (std::abs(d) < 1e-300) throw NumericError("Collineation::inverse: singular matrix");
        Mat3<double> adj = m_.adjugate();
        for (auto& v : adj.m) v /= d;
        return Collineation(adj);
    }

    // Scale so the largest-magnitude entry becomes +1.
    Mat3<double> normalized() const {
        int best = 0;
        for (int i = 1; i < 9; ++i)
            if (std::abs(m_.m[static_cast<size_t>(i)]) > std::abs(m_.m[static_cast<size_t>(best)])) best = i;
        const double s = m_.m[static_cast<size_t>(best)];
        if (s == 0.0) throw NumericError("Collineation::normalized: zero matrix");
        Mat3<double> r = m_;
        for (auto& v : r.m) v /= s;
        return r;
    }

    // Scale so the first nonzero entry in row-major order becomes 1 (exact).
    Mat3<AlgebraicNumber> normalized_exact() const {
        const Mat3<AlgebraicNumber>& e = exact();
        for (const auto& v : e.m) {
            if (!v.is_zero()) {
                Mat3<AlgebraicNumber> r = e;
                const AlgebraicNumber inv = v.inverse();
                for (auto& w : r.m) w = w * inv;
                return r;
            }
        }
        throw ValidationError("Collineation::normalized_exact: zero matrix");
    }

    // Projective equality: exact when both sides carry field matrices,
    // otherwise float comparison of normalized forms.
    bool same_map(const Collineation& o, double tol = 1e-10) const {
        if (exact_ && o.exact_) return normalized_exact() == o.normalized_exact();
        const Mat3<double> a = normalized(), b = o.normalized();
        for (int i = 0; i < 9; ++i)
            if (std::abs(a.m[static_cast<size_t>(i)] - b.m[static_cast<size_t>(i)]) > tol) return false;
        return true;
    }

private:
    Mat3<double> m_;
    std::optional<Mat3<AlgebraicNumber>> exact_;
};

inline DiskPoint collineation_apply(const Collineation& g, const DiskPoint& p) {
    return g.apply(p);
}

// Reflection across the vertical chord x = cos(theta):
//   [ 1 + cos^2       0        -2 cos   ]
//   [    0        -sin^2          0     ]
//   [ 2 cos           0     -1 - cos^2  ]
// Fixes the chord pointwise; squares to a scalar multiple of the identity.
inline Collineation klein_reflection_vertical(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    if (std::abs(s) < 1e-14)
        throw ValidationError("klein_reflection_vertical: degenerate chord (sin theta = 0)");
    Mat3<double> m;
    m(0, 0) = 1.0 + c * c;
    m(0, 2) = -2.0 * c;
    m(1, 1) = -s * s;
    m(2, 0) = 2.0 * c;
    m(2, 2) = -1.0 - c * c;
    return Collineation(m);
}

// General chord reflection by conjugating the vertical case with the rotation
// that takes the x-axis onto the chord normal; cos(theta) = r, so no trig is
// evaluated.
inline Collineation klein_reflection(const KleinChord& chord) {
    if (chord.r >= 1.0) throw ValidationError("klein_reflection: chord outside the disk");
    const double r = chord.r;
    Mat3<double> a;
    a(0, 0) = 1.0 + r * r;
    a(0, 2) = -2.0 * r;
    a(1, 1) = -(1.0 - r * r);
    a(2, 0) = 2.0 * r;
    a(2, 2) = -1.0 - r * r;
    Mat3<double> rot;
    rot(0, 0) = chord.u;
    rot(0, 1) = -chord.v;
    rot(1, 0) = chord.v;
    rot(1, 1) = chord.u;
    rot(2, 2) = 1.0;
    return Collineation(rot * a * rot.transpose());
}

// The Klein-model automorphism induced by the Poincare map
// T(z) = (a z + b)/(conj(b) z + conj(a)) with a*conj(a) - b*conj(b) = 1:
//   [ a1^2-a2^2+b1^2-b2^2   2 b1 b2 - 2 a1 a2    2 a1 b1 - 2 a2 b2 ]
//   [ 2 a1 a2 + 2 b1 b2     a1^2-a2^2-b1^2+b2^2  2 a1 b2 + 2 a2 b1 ]
//   [ 2 a1 b1 + 2 a2 b2     2 a1 b2 - 2 a2 b1    a1^2+a2^2+b1^2+b2^2 ]
template <class C>
auto su11_to_klein_matrix(const C& a, const C& b) {
    using S = std::decay_t<decltype(a.re)>;
    Mat3<S> m;
    const S a1 = a.re, a2 = a.im, b1 = b.re, b2 = b.im;
    m(0, 0) = a1 * a1 - a2 * a2 + b1 * b1 - b2 * b2;
    m(0, 1) = S(2) * (b1 * b2 - a1 * a2);
    m(0, 2) = S(2) * (a1 * b1 - a2 * b2);
    m(1, 0) = S(2) * (a1 * a2 + b1 * b2);
    m(1, 1) = a1 * a1 - a2 * a2 - b1 * b1 + b2 * b2;
    m(1, 2) = S(2) * (a1 * b2 + a2 * b1);
    m(2, 0) = S(2) * (a1 * b1 + a2 * b2);
    m(2, 1) = S(2) * (a1 * b2 - a2 * b1);
    m(2, 2) = a1 * a1 + a2 * a2 + b1 * b1 + b2 * b2;
    return m;
}

inline Collineation su11_to_klein(Cx a, Cx b, double det_tol = 1e-10) {
    if (std::abs(a.abs2() - b.abs2() - 1.0) > det_tol)
        throw ValidationError("su11_to_klein: determinant condition a*conj(a) - b*conj(b) = 1 violated");
    return Collineation(su11_to_klein_matrix(a, b));
}

inline Collineation su11_to_klein(const FieldComplex& a, const FieldComplex& b) {
    if (!(a.norm() - b.norm()).is_one())
        throw ValidationError("su11_to_klein: determinant condition a*conj(a) - b*conj(b) = 1 violated");
    return Collineation(su11_to_klein_matrix(a, b));
}

}  // namespace hyperspline
