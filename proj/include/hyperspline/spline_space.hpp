#pragma once

#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "hyperspline/bolza.hpp"
#include "hyperspline/partition.hpp"
#include "hyperspline/polynomial.hpp"

namespace hyperspline {

// ---------------------------------------------------------------------------
// Smoothing cofactors
// ---------------------------------------------------------------------------

// C^r contact across a line: p_i - p_j must be divisible by l^{r+1}. In the
// line frame that means every coefficient of xt^0..xt^r vanishes; the cofactor
// is the remaining factor, rotated back. Absence is a value, not an error.
inline std::optional<BivariatePolynomial> cofactor_check(const BivariatePolynomial& pi,
                                                         const BivariatePolynomial& pj,
                                                         const LineForm& l, int r,
                                                         double tol = 1e-10) {
    if (r < 0) throw ValidationError("cofactor_check: smoothness must be >= 0");
    const BivariatePolynomial diff = pi - pj;
    const BivariatePolynomial d = to_line_frame(diff, l);
    const int n = d.degree();
    for (int s = 0; s <= r && s <= n; ++s)
        for (int m = 0; s + m <= n; ++m)
            if (std::abs(d.coeff(s, m)) > tol) return std::nullopt;
    if (n < r + 1) return BivariatePolynomial(0);  // difference vanishes entirely
    BivariatePolynomial q(n - (r + 1));
    for (int i = 0; i <= q.degree(); ++i)
        for (int j = 0; i + j <= q.degree(); ++j) q.at(i, j) = d.coeff(i + r + 1, j);
    return from_line_frame(q, l);
}

// ---------------------------------------------------------------------------
// Conformality at a vertex
// ---------------------------------------------------------------------------

// Dimension of { (q_1..q_N) : sum l_i^{r+1} q_i = 0 } for N pairwise
// non-proportional lines through one point, deg q_i <= n - r - 1:
//   1/2 (n - r - t)_+ ((N-1)n - (N+1)r + (N-3) + (N-1)t),  t = [(r+1)/(N-1)].
inline long conformality_dim_formula(int N, int n, int r) {
    if (N < 2) throw ValidationError("conformality_dim_formula: need at least two lines");
    const long t = static_cast<long>(r + 1) / (N - 1);
    const long first = n - r - t;
    if (first <= 0) return 0;
    const long second = static_cast<long>(N - 1) * n - static_cast<long>(N + 1) * r + (N - 3) +
                        static_cast<long>(N - 1) * t;
    return first * second / 2;
}

// Brute-force nullspace of the conformality equation, straight from monomial
// linear algebra: unknowns are the cofactor coefficients, equations the
// coefficients of sum l_i^{r+1} q_i. Serves as the independent oracle for the
// dimension formula.
inline std::vector<std::vector<BivariatePolynomial>> conformality_nullspace(
    const std::vector<LineForm>& lines, int n, int r, double tol = 1e-8) {
    const int N = static_cast<int>(lines.size());
    if (N < 2) throw ValidationError("conformality_nullspace: need at least two lines");

    // Common point of the pencil.
    const LineForm& l0 = lines[0];
    const LineForm& l1 = lines[1];
    const double det = l0.a * l1.b - l1.a * l0.b;
    if (std::abs(det) < 1e-12)
        throw ValidationError("conformality_nullspace: first two lines are parallel");
    const double px = (-l0.c * l1.b + l1.c * l0.b) / det;
    const double py = (-l0.a * l1.c + l1.a * l0.c) / det;
    for (const LineForm& l : lines)
        if (std::abs(l.eval(px, py)) > 1e-10)
            throw ValidationError("conformality_nullspace: lines are not concurrent");

    const int m = n - r - 1;
    if (m < 0) return {};
    const int cols_per = BivariatePolynomial::coeff_count(m);
    const int cols = N * cols_per;
    const int rows = BivariatePolynomial::coeff_count(n);

    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, cols);
    for (int i = 0; i < N; ++i) {
        // Shift so the common point is the origin; the line loses its constant.
        BivariatePolynomial power = BivariatePolynomial::constant(1.0);
        const BivariatePolynomial shifted = linear_poly(lines[static_cast<size_t>(i)].a,
                                                        lines[static_cast<size_t>(i)].b, 0.0);
        for (int k = 0; k < r + 1; ++k) power = power * shifted;
        for (int ii = 0; ii <= m; ++ii)
            for (int jj = 0; ii + jj <= m; ++jj) {
                const BivariatePolynomial col = power * BivariatePolynomial::monomial(ii, jj);
                const int col_idx = i * cols_per + BivariatePolynomial::index(ii, jj);
                for (int ci = 0; ci <= n; ++ci)
                    for (int cj = 0; ci + cj <= n; ++cj)
                        a(BivariatePolynomial::index(ci, cj), col_idx) = col.coeff(ci, cj);
            }
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cutoff = sv.size() > 0 ? sv(0) * tol : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++rank;
    const int dim = cols - rank;

    std::vector<std::vector<BivariatePolynomial>> basis;
    basis.reserve(static_cast<size_t>(dim));
    for (int b = 0; b < dim; ++b) {
        const Eigen::VectorXd v = svd.matrixV().col(cols - 1 - b);
        std::vector<BivariatePolynomial> tuple;
        tuple.reserve(static_cast<size_t>(N));
        for (int i = 0; i < N; ++i) {
            BivariatePolynomial q(m);
            for (int ii = 0; ii <= m; ++ii)
                for (int jj = 0; ii + jj <= m; ++jj)
                    q.at(ii, jj) = v(i * cols_per + BivariatePolynomial::index(ii, jj));
            // Back to original coordinates: q(x - px, y - py).
            tuple.push_back(compose_linear(q, linear_poly(1, 0, -px), linear_poly(0, 1, -py)));
        }
        basis.push_back(std::move(tuple));
    }
    return basis;
}

// ---------------------------------------------------------------------------
// Periodic pullback
// ---------------------------------------------------------------------------

// Compose a degree-n polynomial with a fractional linear map as a rational
// function u / v: u is the homogenization evaluated on the matrix rows and
// v = L3^n, the n-th power of the third-row form. That denominator is forced
// by homogenization; the degree keeps u polynomial.
inline std::pair<BivariatePolynomial, BivariatePolynomial> pullback(const BivariatePolynomial& p,
                                                                    const Collineation& g) {
    const int n = p.degree();
    const Mat3<double>& m = g.matrix();
    const BivariatePolynomial l1 = linear_poly(m(0, 0), m(0, 1), m(0, 2));
    const BivariatePolynomial l2 = linear_poly(m(1, 0), m(1, 1), m(1, 2));
    const BivariatePolynomial l3 = linear_poly(m(2, 0), m(2, 1), m(2, 2));
    std::vector<BivariatePolynomial> p1(static_cast<size_t>(n) + 1),
        p2(static_cast<size_t>(n) + 1), p3(static_cast<size_t>(n) + 1);
    p1[0] = p2[0] = p3[0] = BivariatePolynomial::constant(1.0);
    for (int i = 1; i <= n; ++i) {
        p1[static_cast<size_t>(i)] = p1[static_cast<size_t>(i - 1)] * l1;
        p2[static_cast<size_t>(i)] = p2[static_cast<size_t>(i - 1)] * l2;
        p3[static_cast<size_t>(i)] = p3[static_cast<size_t>(i - 1)] * l3;
    }
    BivariatePolynomial u(n);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; i + j <= n; ++j) {
            const double c = p.coeff(i, j);
            if (c == 0.0) continue;
            u = u + c * (p1[static_cast<size_t>(i)] * p2[static_cast<size_t>(j)] *
                         p3[static_cast<size_t>(n - i - j)])
                        .resized(n);
        }
    return {u, p3[static_cast<size_t>(n)]};
}

// ---------------------------------------------------------------------------
// Constraint assembly
// ---------------------------------------------------------------------------

struct SplineSpaceSpec {
    std::shared_ptr<const Partition> partition;
    int degree = 1;
    int smoothness = 0;  // r; -1 disables all continuity constraints

    int cells() const { return static_cast<int>(partition->cells.size()); }
    int coeffs_per_cell() const { return BivariatePolynomial::coeff_count(degree); }
    int columns() const { return cells() * coeffs_per_cell(); }
};

inline SplineSpaceSpec make_spec(Partition partition, int degree, int smoothness) {
    if (degree < 0) throw ValidationError("spline space: degree must be >= 0");
    if (smoothness < -1) throw ValidationError("spline space: smoothness must be >= -1");
    if (smoothness >= degree && smoothness >= 0)
        std::cerr << "warning: smoothness " << smoothness << " >= degree " << degree
                  << " leaves no room beyond constants\n";
    if (!partition.validated) validate(partition);
    return {std::make_shared<const Partition>(std::move(partition)), degree, smoothness};
}

struct RowTag {
    enum class Kind { InteriorEdge, BoundaryPair };
    Kind kind = Kind::InteriorEdge;
    int index = -1;     // edge index or pair index in the partition
    int xt_order = 0;   // which power of the line coordinate this row zeroes
    int yt_order = 0;
};

// Linear system over the concatenated cell coefficient vectors (cells in
// index order, graded-lex within a cell). Rows are stored sparsely with a
// provenance tag each.
struct ConstraintSystem {
    SplineSpaceSpec spec;
    int cols = 0;
    std::vector<std::vector<std::pair<int, double>>> rows;
    std::vector<RowTag> tags;

    Eigen::MatrixXd dense() const {
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), cols);
        for (size_t i = 0; i < rows.size(); ++i)
            for (const auto& [j, v] : rows[i]) a(static_cast<Eigen::Index>(i), j) = v;
        return a;
    }
};

namespace detail {

// A coefficient slot can be structurally vacuous (the restriction to the
// chord drops degree); such rows are kept, tagged, but zeroed so rounding
// noise does not masquerade as a constraint.
inline void push_row(ConstraintSystem& sys, std::vector<std::pair<int, double>> row, RowTag tag,
                     double scale) {
    double mag = 0.0;
    for (const auto& [j, v] : row) mag = std::max(mag, std::abs(v));
    if (mag <= 1e-13 * scale) row.clear();
    sys.rows.push_back(std::move(row));
    sys.tags.push_back(tag);
}

}  // namespace detail

// C^r matching across an interior edge: zero the xt^0..xt^r coefficients of
// p_i - p_j in the edge frame.
inline void interior_constraint_rows(const SplineSpaceSpec& spec, int edge_index,
                                     ConstraintSystem& sys) {
    const Partition& part = *spec.partition;
    const PartitionEdge& e = part.edges[static_cast<size_t>(edge_index)];
    const auto [ci, cj] = part.edge_cells[static_cast<size_t>(edge_index)];
    if (cj < 0) throw ValidationError("interior_constraint_rows: edge is not interior");
    const int n = spec.degree, r = spec.smoothness;
    const int per = spec.coeffs_per_cell();

    // Frame image of each cell monomial.
    std::vector<BivariatePolynomial> frame(static_cast<size_t>(per));
    for (int i = 0; i <= n; ++i)
        for (int j = 0; i + j <= n; ++j)
            frame[static_cast<size_t>(BivariatePolynomial::index(i, j))] =
                to_line_frame(BivariatePolynomial::monomial(i, j), e.line);

    double scale = 0.0;
    for (const auto& f : frame) scale = std::max(scale, f.max_abs_coeff());

    for (int s = 0; s <= r && s <= n; ++s)
        for (int m = 0; s + m <= n; ++m) {
            std::vector<std::pair<int, double>> row;
            for (int k = 0; k < per; ++k) {
                const double c = frame[static_cast<size_t>(k)].coeff(s, m);
                if (c == 0.0) continue;
                row.push_back({ci * per + k, c});
                row.push_back({cj * per + k, -c});
            }
            detail::push_row(sys, std::move(row), {RowTag::Kind::InteriorEdge, edge_index, s, m},
                             scale);
        }
}

// Periodic matching across an identified boundary edge e -> e' = g(e):
// p_a v - u_b must be divisible by l_e^{r+1}, where u_b / v is p_b pulled
// through g and p_a, p_b are the cells incident to e and e'.
inline void periodic_constraint_rows(const SplineSpaceSpec& spec, int pair_index,
                                     ConstraintSystem& sys) {
    const Partition& part = *spec.partition;
    const BoundaryPair& bp = part.boundary_pairs[static_cast<size_t>(pair_index)];
    const PartitionEdge& e = part.edges[static_cast<size_t>(bp.edge)];
    const int cell_a = part.edge_cells[static_cast<size_t>(bp.edge)][0];
    const int cell_b = part.edge_cells[static_cast<size_t>(bp.partner)][0];
    if (cell_a < 0 || cell_b < 0) throw ValidationError("periodic_constraint_rows: malformed pair");
    const Collineation& g = bolza_generator(bp.generator).klein;
    const int n = spec.degree, r = spec.smoothness;
    const int per = spec.coeffs_per_cell();

    const Mat3<double>& m = g.matrix();
    const BivariatePolynomial l1 = linear_poly(m(0, 0), m(0, 1), m(0, 2));
    const BivariatePolynomial l2 = linear_poly(m(1, 0), m(1, 1), m(1, 2));
    const BivariatePolynomial l3 = linear_poly(m(2, 0), m(2, 1), m(2, 2));
    std::vector<BivariatePolynomial> p1(static_cast<size_t>(n) + 1),
        p2(static_cast<size_t>(n) + 1), p3(static_cast<size_t>(n) + 1);
    p1[0] = p2[0] = p3[0] = BivariatePolynomial::constant(1.0);
    for (int i = 1; i <= n; ++i) {
        p1[static_cast<size_t>(i)] = p1[static_cast<size_t>(i - 1)] * l1;
        p2[static_cast<size_t>(i)] = p2[static_cast<size_t>(i - 1)] * l2;
        p3[static_cast<size_t>(i)] = p3[static_cast<size_t>(i - 1)] * l3;
    }
    const BivariatePolynomial& v = p3[static_cast<size_t>(n)];

    // p_a * v in the frame of e, per monomial of cell_a.
    std::vector<BivariatePolynomial> fa(static_cast<size_t>(per));
    // u contribution of each monomial of cell_b, homogenized at degree n,
    // in the frame of e.
    std::vector<BivariatePolynomial> fb(static_cast<size_t>(per));
    for (int i = 0; i <= n; ++i)
        for (int j = 0; i + j <= n; ++j) {
            const int k = BivariatePolynomial::index(i, j);
            fa[static_cast<size_t>(k)] =
                to_line_frame(BivariatePolynomial::monomial(i, j) * v, e.line);
            const BivariatePolynomial u_k = p1[static_cast<size_t>(i)] *
                                            p2[static_cast<size_t>(j)] *
                                            p3[static_cast<size_t>(n - i - j)];
            fb[static_cast<size_t>(k)] = to_line_frame(u_k, e.line);
        }

    double scale = 0.0;
    for (const auto& f : fa) scale = std::max(scale, f.max_abs_coeff());
    for (const auto& f : fb) scale = std::max(scale, f.max_abs_coeff());

    const int total = 2 * n;
    for (int s = 0; s <= r && s <= total; ++s)
        for (int mm = 0; s + mm <= total; ++mm) {
            std::vector<std::pair<int, double>> row;
            for (int k = 0; k < per; ++k) {
                const double ca = fa[static_cast<size_t>(k)].coeff(s, mm);
                if (ca != 0.0) row.push_back({cell_a * per + k, ca});
                const double cb = fb[static_cast<size_t>(k)].coeff(s, mm);
                if (cb != 0.0) row.push_back({cell_b * per + k, -cb});
            }
            detail::push_row(sys, std::move(row), {RowTag::Kind::BoundaryPair, pair_index, s, mm},
                             scale);
        }
}

inline ConstraintSystem assemble(const SplineSpaceSpec& spec) {
    ConstraintSystem sys;
    sys.spec = spec;
    sys.cols = spec.columns();
    if (spec.smoothness < 0) return sys;  // r = -1: unconstrained
    const Partition& part = *spec.partition;
    for (size_t e = 0; e < part.edges.size(); ++e)
        if (part.edge_cells[e][1] >= 0)
            interior_constraint_rows(spec, static_cast<int>(e), sys);
    for (size_t p = 0; p < part.boundary_pairs.size(); ++p)
        periodic_constraint_rows(spec, static_cast<int>(p), sys);
    return sys;
}

// ---------------------------------------------------------------------------
// Basis extraction and evaluation
// ---------------------------------------------------------------------------

struct PeriodicSpline {
    SplineSpaceSpec spec;
    std::vector<BivariatePolynomial> pieces;  // one per cell
};

struct SplineBasis {
    SplineSpaceSpec spec;
    std::vector<PeriodicSpline> splines;
    double max_residual = 0.0;
    double tol = 1e-10;

    int dimension() const { return static_cast<int>(splines.size()); }
};

// Largest normalized row residual of a coefficient vector. Vacuous rows
// contribute nothing.
inline double system_residual(const ConstraintSystem& sys, const Eigen::VectorXd& coeffs) {
    double worst = 0.0;
    for (const auto& row : sys.rows) {
        double dot = 0.0, norm2 = 0.0;
        for (const auto& [j, v] : row) {
            dot += v * coeffs(j);
            norm2 += v * v;
        }
        if (norm2 > 0.0) worst = std::max(worst, std::abs(dot) / std::sqrt(norm2));
    }
    return worst;
}

inline PeriodicSpline spline_from_coeffs(const SplineSpaceSpec& spec, const Eigen::VectorXd& v) {
    PeriodicSpline s{spec, {}};
    const int per = spec.coeffs_per_cell();
    for (int c = 0; c < spec.cells(); ++c) {
        BivariatePolynomial p(spec.degree);
        for (int i = 0; i <= spec.degree; ++i)
            for (int j = 0; i + j <= spec.degree; ++j)
                p.at(i, j) = v(c * per + BivariatePolynomial::index(i, j));
        s.pieces.push_back(std::move(p));
    }
    return s;
}

// Orthonormal nullspace basis via a rank-revealing SVD; the rank cut is
// tol * sigma_max.
inline SplineBasis solve_basis(const ConstraintSystem& sys, double tol = 1e-10) {
    if (sys.cols == 0) throw ValidationError("solve_basis: empty partition");
    SplineBasis basis;
    basis.spec = sys.spec;
    basis.tol = tol;

    std::vector<Eigen::VectorXd> kernel;
    if (sys.rows.empty()) {
        for (int i = 0; i < sys.cols; ++i) {
            Eigen::VectorXd v = Eigen::VectorXd::Zero(sys.cols);
            v(i) = 1.0;
            kernel.push_back(std::move(v));
        }
    } else {
        const Eigen::MatrixXd a = sys.dense();
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        const double cutoff = sv.size() > 0 ? sv(0) * tol : 0.0;
        int rank = 0;
        for (int i = 0; i < sv.size(); ++i)
            if (sv(i) > cutoff) ++rank;
        for (int i = rank; i < sys.cols; ++i) kernel.push_back(svd.matrixV().col(i));
    }

    for (const Eigen::VectorXd& v : kernel) {
        basis.splines.push_back(spline_from_coeffs(sys.spec, v));
        basis.max_residual = std::max(basis.max_residual, system_residual(sys, v));
    }
    return basis;
}

// Evaluate by carrying the point into the fundamental domain first, so the
// value is group invariant by construction.
inline double spline_eval(const PeriodicSpline& f, const DiskPoint& p, double tol = 1e-10) {
    const CanonicalPoint c = canonicalize(p, tol);
    const CellLocation loc = locate_cell(*f.spec.partition, c.q, 1e-9);
    return f.pieces[static_cast<size_t>(loc.cell)].eval(c.q.x, c.q.y);
}

}  // namespace hyperspline
