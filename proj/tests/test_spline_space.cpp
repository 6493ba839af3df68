#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "hyperspline/spline_space.hpp"

using namespace hyperspline;

namespace {

BivariatePolynomial random_poly(std::mt19937_64& rng, int degree, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> c(lo, hi);
    BivariatePolynomial p(degree);
    for (double& v : p.coeffs()) v = c(rng);
    return p;
}

LineForm random_line_through(std::mt19937_64& rng, double px, double py) {
    std::uniform_real_distribution<double> ang(0.0, pi());
    const double t = ang(rng);
    const double a = std::cos(t), b = std::sin(t);
    return {a, b, -(a * px + b * py)};
}

BivariatePolynomial line_power(const LineForm& l, int k) {
    BivariatePolynomial p = BivariatePolynomial::constant(1.0);
    const BivariatePolynomial lin = linear_poly(l.a, l.b, l.c);
    for (int i = 0; i < k; ++i) p = p * lin;
    return p;
}

DiskPoint random_interior_klein(std::mt19937_64& rng, double max_r = 0.9) {
    std::uniform_real_distribution<double> ang(0.0, 2.0 * pi());
    std::uniform_real_distribution<double> rad(0.0, max_r);
    const double r = rad(rng), t = ang(rng);
    return klein_point(r * std::cos(t), r * std::sin(t));
}

}  // namespace

TEST_CASE("cofactor_check basics") {
    const LineForm x_axis(1, 0, 0);  // x = 0

    // Equal pieces: zero cofactor.
    std::mt19937_64 rng(3);
    const BivariatePolynomial p = random_poly(rng, 2);
    const auto q0 = cofactor_check(p, p, x_axis, 1);
    REQUIRE(q0.has_value());
    CHECK(q0->max_abs_coeff() < 1e-12);

    // x^2 = x^2 * 1 across x = 0 with r = 1.
    const BivariatePolynomial x2 = BivariatePolynomial::monomial(2, 0);
    const auto q1 = cofactor_check(x2, BivariatePolynomial(2), x_axis, 1);
    REQUIRE(q1.has_value());
    CHECK(q1->coeff(0, 0) == Catch::Approx(1.0).margin(1e-12));
    CHECK(q1->degree() == 0);

    // x is not divisible by x^2.
    const BivariatePolynomial x1 = BivariatePolynomial::monomial(1, 0);
    CHECK_FALSE(cofactor_check(x1, BivariatePolynomial(1), x_axis, 1).has_value());
}

TEST_CASE("cofactor_check round trip on planted factorizations") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> pt(-1.0, 1.0);
    std::uniform_int_distribution<int> rdist(0, 2);
    for (int t = 0; t < 50; ++t) {
        const int r = rdist(rng);
        const int qdeg = 1 + (t % 2);
        const LineForm l = random_line_through(rng, pt(rng) * 0.5, pt(rng) * 0.5);
        const BivariatePolynomial q = random_poly(rng, qdeg);
        const BivariatePolynomial pj = random_poly(rng, r + 1 + qdeg);
        const BivariatePolynomial pi = pj + line_power(l, r + 1) * q;
        const auto rec = cofactor_check(pi, pj, l, r);
        REQUIRE(rec.has_value());
        // Reconstruction oracle at 50 sample points.
        const BivariatePolynomial back = line_power(l, r + 1) * *rec;
        for (int s = 0; s < 50; ++s) {
            const double x = pt(rng), y = pt(rng);
            CHECK(std::abs(pi.eval(x, y) - pj.eval(x, y) - back.eval(x, y)) < 1e-9);
        }
    }
}

TEST_CASE("cofactor_check rejects planted non-divisible cases") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> pt(-1.0, 1.0);
    std::uniform_real_distribution<double> big(0.25, 1.0);
    std::uniform_int_distribution<int> rdist(0, 2);
    std::uniform_int_distribution<int> sign(0, 1);
    for (int t = 0; t < 50; ++t) {
        const int r = rdist(rng);
        const LineForm l = random_line_through(rng, pt(rng) * 0.5, pt(rng) * 0.5);
        const BivariatePolynomial q = random_poly(rng, 1);
        // Low-order junk of degree <= r can never be divisible by l^{r+1}.
        BivariatePolynomial junk(r);
        for (double& v : junk.coeffs()) v = (sign(rng) ? 1.0 : -1.0) * big(rng);
        const BivariatePolynomial pj = random_poly(rng, r + 2);
        const BivariatePolynomial pi = pj + line_power(l, r + 1) * q + junk;
        CHECK_FALSE(cofactor_check(pi, pj, l, r).has_value());
    }
}

TEST_CASE("conformality dimension formula values") {
    CHECK(conformality_dim_formula(2, 2, 0) == 1);
    CHECK(conformality_dim_formula(3, 2, 1) == 0);
    CHECK(conformality_dim_formula(2, 0, 0) == 0);
    CHECK(conformality_dim_formula(4, 1, 0) == 2);
    CHECK(conformality_dim_formula(5, 1, 0) == 3);
    // n <= r truncates to zero.
    for (int nn = 0; nn <= 3; ++nn)
        for (int rr = nn; rr <= 4; ++rr) CHECK(conformality_dim_formula(3, nn, rr) == 0);
    CHECK_THROWS_AS(conformality_dim_formula(1, 2, 0), ValidationError);
}

TEST_CASE("conformality nullspace for the pencil {x, y}") {
    const std::vector<LineForm> lines{LineForm(1, 0, 0), LineForm(0, 1, 0)};
    const auto basis = conformality_nullspace(lines, 2, 0);
    REQUIRE(basis.size() == 1);
    // Solution is c (y, -x): q1 proportional to y, q2 to -x with equal factors.
    const BivariatePolynomial& q1 = basis[0][0];
    const BivariatePolynomial& q2 = basis[0][1];
    const double c = q1.coeff(0, 1);
    CHECK(std::abs(c) > 1e-8);
    CHECK(q2.coeff(1, 0) == Catch::Approx(-c).margin(1e-10));
    CHECK(std::abs(q1.coeff(0, 0)) < 1e-10);
    CHECK(std::abs(q1.coeff(1, 0)) < 1e-10);
    CHECK(std::abs(q2.coeff(0, 0)) < 1e-10);
    CHECK(std::abs(q2.coeff(0, 1)) < 1e-10);
}

TEST_CASE("conformality nullspace edge cases") {
    const std::vector<LineForm> lines{LineForm(1, 0, 0), LineForm(0, 1, 0), LineForm(1, 1, 0)};
    // n - r - 1 < 0: no cofactor space at all.
    CHECK(conformality_nullspace(lines, 1, 1).empty());
    // Non-concurrent lines are rejected.
    const std::vector<LineForm> bad{LineForm(1, 0, 0), LineForm(0, 1, 0), LineForm(1, 1, -0.5)};
    CHECK_THROWS_AS(conformality_nullspace(bad, 2, 0), ValidationError);
}

TEST_CASE("conformality solutions satisfy the equation") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> pt(-0.5, 0.5);
    for (int t = 0; t < 10; ++t) {
        const double px = pt(rng), py = pt(rng);
        std::vector<LineForm> lines;
        for (int i = 0; i < 4; ++i) lines.push_back(random_line_through(rng, px, py));
        bool generic = true;
        for (size_t i = 0; i < lines.size() && generic; ++i)
            for (size_t j = i + 1; j < lines.size(); ++j)
                if (std::abs(lines[i].a * lines[j].b - lines[j].a * lines[i].b) < 1e-3) generic = false;
        if (!generic) continue;

        const int n = 3, r = 1;
        const auto basis = conformality_nullspace(lines, n, r);
        CHECK(static_cast<long>(basis.size()) == conformality_dim_formula(4, n, r));
        for (const auto& tuple : basis) {
            BivariatePolynomial sum(n);
            for (size_t i = 0; i < lines.size(); ++i)
                sum = sum + (line_power(lines[i], r + 1) * tuple[i]).resized(n);
            CHECK(sum.max_abs_coeff() < 1e-7);
        }
    }
}

namespace {

// Pairwise non-proportional lines through one common point.
std::vector<LineForm> generic_pencil(std::mt19937_64& rng, int N, double px, double py) {
    std::uniform_real_distribution<double> ang(0.0, pi());
    std::vector<double> angles;
    while (static_cast<int>(angles.size()) < N) {
        const double t = ang(rng);
        bool ok = true;
        for (double s : angles)
            if (std::abs(std::sin(t - s)) < 0.05) ok = false;
        if (ok) angles.push_back(t);
    }
    std::vector<LineForm> lines;
    for (double t : angles)
        lines.push_back({std::cos(t), std::sin(t), -(std::cos(t) * px + std::sin(t) * py)});
    return lines;
}

}  // namespace

TEST_CASE("dimension formula sweep against the nullspace oracle") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> pt(-0.4, 0.4);
    for (int N = 2; N <= 4; ++N)
        for (int n = 1; n <= 3; ++n)
            for (int r = 0; r < n && r <= 2; ++r) {
                const auto lines = generic_pencil(rng, N, pt(rng), pt(rng));
                const auto basis = conformality_nullspace(lines, n, r);
                CHECK(static_cast<long>(basis.size()) == conformality_dim_formula(N, n, r));
            }
}

TEST_CASE("pullback") {
    std::mt19937_64 rng(31);
    const Collineation id;

    // Identity: u = p, v = 1.
    const BivariatePolynomial p = random_poly(rng, 2);
    const auto [u0, v0] = pullback(p, id);
    CHECK(v0.eval(0.3, -0.2) == Catch::Approx(1.0).margin(1e-14));
    for (int i = 0; i <= 2; ++i)
        for (int j = 0; i + j <= 2; ++j)
            CHECK(u0.coeff(i, j) == Catch::Approx(p.coeff(i, j)).margin(1e-13));

    // Constants are invariant: u = c * v.
    const Collineation g0 = bolza_generator(0).klein;
    const auto [uc, vc] = pullback(BivariatePolynomial::constant(2.5).resized(2), g0);
    for (int s = 0; s < 5; ++s) {
        const DiskPoint z = random_interior_klein(rng, 0.8);
        CHECK(uc.eval(z.x, z.y) / vc.eval(z.x, z.y) == Catch::Approx(2.5).margin(1e-10));
    }

    // p = x against the point-evaluation oracle.
    const auto [ux, vx] = pullback(BivariatePolynomial::monomial(1, 0), g0);
    const DiskPoint img = collineation_apply(g0, klein_point(0.1, 0.2));
    CHECK(ux.eval(0.1, 0.2) / vx.eval(0.1, 0.2) == Catch::Approx(img.x).margin(1e-12));
}

TEST_CASE("pullback correctness on random samples") {
    std::mt19937_64 rng(37);
    const auto elements = enumerate_elements(2);
    std::uniform_int_distribution<size_t> pick(0, elements.size() - 1);
    for (int t = 0; t < 20; ++t) {
        const Collineation& g = elements[pick(rng)].klein;
        const BivariatePolynomial p = random_poly(rng, 3);
        const auto [u, v] = pullback(p, g);
        for (int s = 0; s < 100; ++s) {
            const DiskPoint z = random_interior_klein(rng, 0.85);
            const DiskPoint gz = collineation_apply(g, z);
            const double expect = p.eval(gz.x, gz.y);
            const double got = u.eval(z.x, z.y) / v.eval(z.x, z.y);
            CHECK(got == Catch::Approx(expect).margin(1e-10 * std::max(1.0, std::abs(expect))));
        }
    }
}

TEST_CASE("interior rows: counts and constants") {
    const SplineSpaceSpec spec = make_spec(default_triangulation(), 1, 0);
    ConstraintSystem sys;
    sys.spec = spec;
    sys.cols = spec.columns();
    interior_constraint_rows(spec, 0, sys);  // spoke edge
    CHECK(sys.rows.size() == 2);

    // Equal linear pieces satisfy the rows.
    Eigen::VectorXd v = Eigen::VectorXd::Zero(sys.cols);
    const auto [ci, cj] = spec.partition->edge_cells[0];
    for (int k = 0; k < 3; ++k) {
        v(ci * 3 + k) = 0.7 - 0.2 * k;
        v(cj * 3 + k) = 0.7 - 0.2 * k;
    }
    CHECK(system_residual(sys, v) < 1e-13);
}

TEST_CASE("periodic rows: counts, constants, violations") {
    const SplineSpaceSpec spec = make_spec(default_triangulation(), 1, 0);
    ConstraintSystem sys;
    sys.spec = spec;
    sys.cols = spec.columns();
    periodic_constraint_rows(spec, 0, sys);
    CHECK(sys.rows.size() == 3);  // degree-2 restriction to the line: 3 coefficients

    const Partition& part = *spec.partition;
    const BoundaryPair& bp = part.boundary_pairs[0];
    const int cell_a = part.edge_cells[static_cast<size_t>(bp.edge)][0];
    const int cell_b = part.edge_cells[static_cast<size_t>(bp.partner)][0];

    // Constant splines pass every row.
    Eigen::VectorXd c = Eigen::VectorXd::Zero(sys.cols);
    c(cell_a * 3 + 0) = 4.0;
    c(cell_b * 3 + 0) = 4.0;
    CHECK(system_residual(sys, c) < 1e-12);

    // p_a = x, p_b = x violates the pair for a hyperbolic generator.
    Eigen::VectorXd x = Eigen::VectorXd::Zero(sys.cols);
    x(cell_a * 3 + 1) = 1.0;
    x(cell_b * 3 + 1) = 1.0;
    CHECK(system_residual(sys, x) > 1e-3);
}

TEST_CASE("assemble and solve: piecewise constants") {
    const SplineSpaceSpec spec = make_spec(default_triangulation(), 0, 0);
    const ConstraintSystem sys = assemble(spec);
    const SplineBasis basis = solve_basis(sys);
    CHECK(basis.dimension() == 1);
    CHECK(basis.max_residual < 1e-12);

    // The single basis spline is a constant.
    const PeriodicSpline& s = basis.splines[0];
    for (const auto& piece : s.pieces)
        CHECK(piece.coeff(0, 0) == Catch::Approx(s.pieces[0].coeff(0, 0)).margin(1e-12));
}

TEST_CASE("assemble with r = -1 is unconstrained") {
    const SplineSpaceSpec spec = make_spec(default_triangulation(), 1, -1);
    const ConstraintSystem sys = assemble(spec);
    CHECK(sys.rows.empty());
    const SplineBasis basis = solve_basis(sys);
    CHECK(basis.dimension() == 8 * 3);
}

TEST_CASE("constant-1 spline satisfies every assembled row") {
    for (int n = 0; n <= 2; ++n) {
        const SplineSpaceSpec spec = make_spec(default_triangulation(), n, 0);
        const ConstraintSystem sys = assemble(spec);
        Eigen::VectorXd one = Eigen::VectorXd::Zero(sys.cols);
        for (int c = 0; c < spec.cells(); ++c) one(c * spec.coeffs_per_cell()) = 1.0;
        CHECK(system_residual(sys, one) < 1e-12);
    }
}

TEST_CASE("splines passing the interior rows are continuous across edges") {
    const SplineSpaceSpec spec = make_spec(default_triangulation(), 1, 0);
    const SplineBasis basis = solve_basis(assemble(spec));
    const Partition& part = *spec.partition;
    for (const PeriodicSpline& s : basis.splines) {
        for (size_t e = 0; e < part.edges.size(); ++e) {
            const auto [ci, cj] = part.edge_cells[e];
            if (cj < 0) continue;
            const DiskPoint& a = part.vertices[static_cast<size_t>(part.edges[e].v0)];
            const DiskPoint& b = part.vertices[static_cast<size_t>(part.edges[e].v1)];
            for (int t = 0; t < 20; ++t) {
                const double w = (t + 0.5) / 20.0;
                const double x = a.x + w * (b.x - a.x), y = a.y + w * (b.y - a.y);
                CHECK(std::abs(s.pieces[static_cast<size_t>(ci)].eval(x, y) -
                               s.pieces[static_cast<size_t>(cj)].eval(x, y)) < 1e-9);
            }
        }
    }
}

TEST_CASE("solve_basis: constants lie in the span") {
    const SplineSpaceSpec spec = make_spec(default_triangulation(), 1, 0);
    const ConstraintSystem sys = assemble(spec);
    const SplineBasis basis = solve_basis(sys);
    REQUIRE(basis.dimension() >= 1);
    CHECK(basis.max_residual < 1e-9);

    Eigen::VectorXd one = Eigen::VectorXd::Zero(sys.cols);
    for (int c = 0; c < spec.cells(); ++c) one(c * spec.coeffs_per_cell()) = 1.0;
    // Project the constant onto the orthonormal kernel basis.
    Eigen::VectorXd proj = Eigen::VectorXd::Zero(sys.cols);
    for (const PeriodicSpline& s : basis.splines) {
        Eigen::VectorXd b(sys.cols);
        int idx = 0;
        for (const auto& piece : s.pieces)
            for (double v : piece.coeffs()) b(idx++) = v;
        proj += b.dot(one) * b;
    }
    CHECK((proj - one).norm() < 1e-9);
}

TEST_CASE("solve dimension agrees with an independent dense solver") {
    const SplineSpaceSpec spec = make_spec(default_triangulation(), 1, 0);
    const ConstraintSystem sys = assemble(spec);
    const SplineBasis basis = solve_basis(sys);

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sys.dense());
    qr.setThreshold(1e-10);
    CHECK(basis.dimension() == sys.cols - static_cast<int>(qr.rank()));
}

TEST_CASE("nullspace dimension is invariant under row scaling") {
    const SplineSpaceSpec spec = make_spec(default_triangulation(), 1, 0);
    ConstraintSystem sys = assemble(spec);
    const int dim = solve_basis(sys).dimension();
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> scale(0.1, 10.0);
    for (int t = 0; t < 10; ++t) {
        ConstraintSystem scaled = sys;
        for (auto& row : scaled.rows) {
            const double s = scale(rng);
            for (auto& [j, v] : row) v *= s;
        }
        CHECK(solve_basis(scaled).dimension() == dim);
    }
}

TEST_CASE("spline_eval: constants, periodicity, continuity") {
    const SplineSpaceSpec spec = make_spec(default_triangulation(), 1, 0);
    const SplineBasis basis = solve_basis(assemble(spec));
    REQUIRE(basis.dimension() >= 1);

    // A constant function evaluates to its constant everywhere.
    PeriodicSpline cst{spec, {}};
    for (int c = 0; c < spec.cells(); ++c) {
        BivariatePolynomial p(1);
        p.at(0, 0) = 3.25;
        cst.pieces.push_back(p);
    }
    std::mt19937_64 rng(43);
    for (int t = 0; t < 100; ++t)
        CHECK(spline_eval(cst, random_interior_klein(rng, 0.97)) == Catch::Approx(3.25).margin(1e-12));

    // Basis splines are multiply periodic.
    for (const PeriodicSpline& s : basis.splines) {
        for (int t = 0; t < 25; ++t) {
            const DiskPoint p = random_interior_klein(rng, 0.9);
            const double fp = spline_eval(s, p);
            for (int k = 0; k < 8; ++k) {
                const double fg = spline_eval(s, group_apply(bolza_generator(k), p));
                CHECK(std::abs(fp - fg) < 1e-9);
            }
        }
    }

    // Continuity across an identified boundary: straddle side 0's midpoint.
    const FundamentalOctagon& oct = bolza_octagon();
    const DiskPoint m = klein_point((oct.corners[0].x + oct.corners[1].x) / 2,
                                    (oct.corners[0].y + oct.corners[1].y) / 2);
    const KleinChord& side = oct.sides[0];
    for (const PeriodicSpline& s : basis.splines) {
        const double eps = 1e-8;
        const DiskPoint inside = klein_point(m.x - eps * side.u, m.y - eps * side.v);
        const DiskPoint outside = klein_point(m.x + eps * side.u, m.y + eps * side.v);
        CHECK(std::abs(spline_eval(s, inside) - spline_eval(s, outside)) < 1e-6);
    }
}
