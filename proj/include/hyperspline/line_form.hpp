#pragma once

#include <cmath>

#include "hyperspline/disk_models.hpp"
#include "hyperspline/errors.hpp"

namespace hyperspline {

// Oriented line a*x + b*y + c = 0, normalized so a^2 + b^2 = 1 and the first
// nonzero of (a, b) is positive. The normalization keeps divisibility
// computations reproducible.
struct LineForm {
    double a = 1.0;
    double b = 0.0;
    double c = 0.0;

    LineForm() = default;
    LineForm(double a_, double b_, double c_) : a(a_), b(b_), c(c_) { normalize(); }

    static LineForm through(const DiskPoint& p, const DiskPoint& q) {
        const double nx = q.y - p.y, ny = p.x - q.x;
        if (nx == 0.0 && ny == 0.0) throw ValidationError("LineForm::through: coincident points");
        return {nx, ny, -(nx * p.x + ny * p.y)};
    }

    static LineForm from_chord(const KleinChord& ch) { return {ch.u, ch.v, -ch.r}; }

    double eval(double x, double y) const { return a * x + b * y + c; }

private:
    void normalize() {
        const double len = std::hypot(a, b);
        if (len == 0.0) throw ValidationError("LineForm: degenerate line");
        a /= len;
        b /= len;
        c /= len;
        if (a < -1e-15 || (std::abs(a) <= 1e-15 && b < 0.0)) {
            a = -a;
            b = -b;
            c = -c;
        }
    }
};

}  // namespace hyperspline
