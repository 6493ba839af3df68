#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "hyperspline/partition.hpp"

using namespace hyperspline;

TEST_CASE("default triangulation shape") {
    const Partition p = default_triangulation();
    CHECK(p.cells.size() == 8);
    CHECK(p.vertices.size() == 9);
    CHECK(p.edges.size() == 16);
    CHECK(p.boundary_pairs.size() == 4);

    // One interior vertex (the center), eight boundary vertices.
    CHECK(p.vertices[0].x == 0.0);
    CHECK(p.vertices[0].y == 0.0);
    int interior = 0, corners = 0;
    for (const DiskPoint& v : p.vertices) {
        const OctLocation loc = contains(v);
        if (loc.kind == OctLocation::Kind::Inside) ++interior;
        if (loc.kind == OctLocation::Kind::OnCorner) ++corners;
    }
    CHECK(interior == 1);
    CHECK(corners == 8);

    // All 8 spokes pass through the origin: the line constant term vanishes.
    for (int k = 0; k < 8; ++k) CHECK(std::abs(p.edges[static_cast<size_t>(k)].line.c) < 1e-14);

    // Interior edges are the spokes, boundary edges are the octagon sides.
    for (int k = 0; k < 8; ++k) {
        CHECK(p.edge_cells[static_cast<size_t>(k)][1] >= 0);
        CHECK(p.edge_cells[static_cast<size_t>(8 + k)][1] < 0);
        CHECK(p.edge_pair[static_cast<size_t>(8 + k)] >= 0);
    }
}

TEST_CASE("boundary pairs map endpoints under their generator") {
    const Partition p = default_triangulation();
    for (const BoundaryPair& bp : p.boundary_pairs) {
        const GroupElement& g = bolza_generator(bp.generator);
        const PartitionEdge& e = p.edges[static_cast<size_t>(bp.edge)];
        const PartitionEdge& f = p.edges[static_cast<size_t>(bp.partner)];
        const DiskPoint i0 = group_apply(g, p.vertices[static_cast<size_t>(e.v0)]);
        const DiskPoint i1 = group_apply(g, p.vertices[static_cast<size_t>(e.v1)]);
        const DiskPoint& t0 = p.vertices[static_cast<size_t>(bp.flip ? f.v1 : f.v0)];
        const DiskPoint& t1 = p.vertices[static_cast<size_t>(bp.flip ? f.v0 : f.v1)];
        CHECK(std::hypot(i0.x - t0.x, i0.y - t0.y) < 1e-10);
        CHECK(std::hypot(i1.x - t1.x, i1.y - t1.y) < 1e-10);
    }
}

TEST_CASE("validation failures") {
    // Clockwise cell is normalized, not rejected.
    {
        Partition p = default_triangulation();
        std::reverse(p.cells[2].begin(), p.cells[2].end());
        p.validated = false;
        validate(p);
        CHECK(detail::polygon_area(p, p.cells[2]) > 0.0);
    }
    // Pair referencing an interior edge.
    {
        Partition p = default_triangulation();
        p.boundary_pairs[0].edge = 0;  // spoke
        CHECK_THROWS_AS(validate(p), ValidationError);
    }
    // Vertex outside the octagon.
    {
        Partition p = default_triangulation();
        p.vertices[0] = klein_point(0.99, 0.0);
        CHECK_THROWS_AS(validate(p), ValidationError);
    }
    // Dangling edge.
    {
        Partition p = default_triangulation();
        p.edges.push_back({1, 3, {}});
        CHECK_THROWS_AS(validate(p), ValidationError);
    }
    // Broken pair: wrong generator.
    {
        Partition p = default_triangulation();
        p.boundary_pairs[0].generator = (p.boundary_pairs[0].generator + 1) % 8;
        CHECK_THROWS_AS(validate(p), ValidationError);
    }
}

TEST_CASE("locate_cell") {
    const Partition p = default_triangulation();

    // Fan vertex: every cell contains it; the tie break picks cell 0.
    const CellLocation center = locate_cell(p, klein_point(0, 0));
    CHECK(center.cell == 0);
    CHECK(center.vertex == 0);

    // Sector midpoints land in their own cell.
    for (int k = 0; k < 8; ++k) {
        const double ang = pi() / 8.0 + (k + 0.5) * pi() / 4.0;
        const DiskPoint q = klein_point(0.5 * std::cos(ang), 0.5 * std::sin(ang));
        CHECK(locate_cell(p, q).cell == k);
    }

    // Point on the spoke between cells 2 and 3 goes to cell 2.
    {
        const double ang = pi() / 8.0 + 3.0 * pi() / 4.0;
        const DiskPoint q = klein_point(0.5 * std::cos(ang), 0.5 * std::sin(ang));
        const CellLocation loc = locate_cell(p, q);
        CHECK(loc.cell == 2);
        CHECK(loc.edge == 3);  // spoke to corner 3
    }

    CHECK_THROWS_AS(locate_cell(p, klein_point(0.999, 0)), ValidationError);
}

TEST_CASE("locate_cell partitions the octagon") {
    const Partition p = default_triangulation();
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    int found = 0;
    for (int i = 0; i < 10000; ++i) {
        const DiskPoint q = klein_point(coord(rng), coord(rng));
        if (contains(q).kind != OctLocation::Kind::Inside) continue;
        ++found;
        const CellLocation loc = locate_cell(p, q);
        // Exactly one cell claims the point: count closed memberships.
        int owners = 0;
        for (size_t ci = 0; ci < p.cells.size(); ++ci) {
            const auto& cell = p.cells[ci];
            bool inside = true;
            for (size_t j = 0; j < cell.size() && inside; ++j) {
                const DiskPoint& a = p.vertices[static_cast<size_t>(cell[j])];
                const DiskPoint& b = p.vertices[static_cast<size_t>(cell[(j + 1) % cell.size()])];
                if ((b.x - a.x) * (q.y - a.y) - (b.y - a.y) * (q.x - a.x) < -1e-10) inside = false;
            }
            if (inside) ++owners;
        }
        const bool on_skeleton = loc.edge >= 0 || loc.vertex >= 0;
        if (!on_skeleton) CHECK(owners == 1);
    }
    CHECK(found > 1000);
}

TEST_CASE("refine splits each triangle into four") {
    const Partition p = default_triangulation();
    const Partition r = refine(p);
    CHECK(r.cells.size() == 32);
    CHECK(r.validated);
    CHECK(r.boundary_pairs.size() == 8);

    // Paired boundary children map onto their partners within 1e-9.
    for (const BoundaryPair& bp : r.boundary_pairs) {
        const GroupElement& g = bolza_generator(bp.generator);
        const PartitionEdge& e = r.edges[static_cast<size_t>(bp.edge)];
        const PartitionEdge& f = r.edges[static_cast<size_t>(bp.partner)];
        const DiskPoint i0 = group_apply(g, r.vertices[static_cast<size_t>(e.v0)]);
        const DiskPoint i1 = group_apply(g, r.vertices[static_cast<size_t>(e.v1)]);
        const DiskPoint& t0 = r.vertices[static_cast<size_t>(bp.flip ? f.v1 : f.v0)];
        const DiskPoint& t1 = r.vertices[static_cast<size_t>(bp.flip ? f.v0 : f.v1)];
        CHECK(std::hypot(i0.x - t0.x, i0.y - t0.y) < 1e-9);
        CHECK(std::hypot(i1.x - t1.x, i1.y - t1.y) < 1e-9);
    }

    // A second refinement still validates.
    const Partition rr = refine(r);
    CHECK(rr.cells.size() == 128);
}
