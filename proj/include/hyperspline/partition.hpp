#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "hyperspline/bolza.hpp"
#include "hyperspline/disk_models.hpp"
#include "hyperspline/errors.hpp"
#include "hyperspline/line_form.hpp"

namespace hyperspline {

struct PartitionEdge {
    int v0 = -1;
    int v1 = -1;
    LineForm line;  // recomputed from the vertices, never trusted from a file
};

// Boundary identification: the Bolza generator `generator` maps `edge` onto
// `partner`; flip marks a reversed endpoint correspondence.
struct BoundaryPair {
    int edge = -1;
    int partner = -1;
    int generator = -1;
    bool flip = false;
};

// Partition of the fundamental octagon into convex cells with straight-chord
// edges. validate() normalizes orientation, recomputes edge lines, checks
// every structural invariant and fills the derived incidence tables.
struct Partition {
    std::vector<DiskPoint> vertices;
    std::vector<PartitionEdge> edges;
    std::vector<std::vector<int>> cells;  // counterclockwise vertex cycles
    std::vector<BoundaryPair> boundary_pairs;

    // Derived by validate().
    std::vector<std::array<int, 2>> edge_cells;  // incident cells, -1 if none
    std::vector<int> edge_pair;                  // pair index per edge, -1 interior
    bool validated = false;

    int find_edge(int a, int b) const {
        for (size_t i = 0; i < edges.size(); ++i) {
            if ((edges[i].v0 == a && edges[i].v1 == b) || (edges[i].v0 == b && edges[i].v1 == a))
                return static_cast<int>(i);
        }
        return -1;
    }
};

namespace detail {

inline double polygon_area(const Partition& p, const std::vector<int>& cell) {
    double s = 0.0;
    for (size_t i = 0; i < cell.size(); ++i) {
        const DiskPoint& a = p.vertices[static_cast<size_t>(cell[i])];
        const DiskPoint& b = p.vertices[static_cast<size_t>(cell[(i + 1) % cell.size()])];
        s += a.x * b.y - b.x * a.y;
    }
    return s / 2.0;
}

inline double octagon_area() {
    const FundamentalOctagon& oct = bolza_octagon();
    double s = 0.0;
    for (int k = 0; k < 8; ++k) {
        const DiskPoint& a = oct.corners[static_cast<size_t>(k)];
        const DiskPoint& b = oct.corners[static_cast<size_t>((k + 1) % 8)];
        s += a.x * b.y - b.x * a.y;
    }
    return s / 2.0;
}

}  // namespace detail

inline void validate(Partition& p, double pair_tol = 1e-8) {
    const size_t nv = p.vertices.size(), ne = p.edges.size(), nc = p.cells.size();
    if (nv == 0 || ne == 0 || nc == 0) throw ValidationError("partition: empty component");

    for (auto& v : p.vertices) {
        if (v.model != DiskModel::Klein) throw ValidationError("partition: vertices must be Klein points");
        if (contains(v, 1e-8).kind == OctLocation::Kind::Outside)
            throw ValidationError("partition: vertex outside the closed fundamental octagon");
    }

    std::map<std::pair<int, int>, int> by_pair;
    for (size_t i = 0; i < ne; ++i) {
        PartitionEdge& e = p.edges[i];
        if (e.v0 < 0 || e.v1 < 0 || e.v0 >= static_cast<int>(nv) || e.v1 >= static_cast<int>(nv))
            throw ValidationError("partition: edge references a missing vertex");
        if (e.v0 == e.v1) throw ValidationError("partition: degenerate edge");
        auto key = std::minmax(e.v0, e.v1);
        if (!by_pair.emplace(std::pair<int, int>(key.first, key.second), static_cast<int>(i)).second)
            throw ValidationError("partition: duplicate edge");
        e.line = LineForm::through(p.vertices[static_cast<size_t>(e.v0)],
                                   p.vertices[static_cast<size_t>(e.v1)]);
    }

    p.edge_cells.assign(ne, {-1, -1});
    double area_sum = 0.0;
    for (size_t ci = 0; ci < nc; ++ci) {
        std::vector<int>& cell = p.cells[ci];
        if (cell.size() < 3) throw ValidationError("partition: cell with fewer than 3 vertices");
        const double area = detail::polygon_area(p, cell);
        if (area < 0.0) std::reverse(cell.begin(), cell.end());  // normalize to CCW
        if (std::abs(area) <= 1e-14) throw ValidationError("partition: degenerate cell");
        area_sum += std::abs(area);

        const size_t n = cell.size();
        for (size_t i = 0; i < n; ++i) {
            const DiskPoint& a = p.vertices[static_cast<size_t>(cell[i])];
            const DiskPoint& b = p.vertices[static_cast<size_t>(cell[(i + 1) % n])];
            const DiskPoint& c = p.vertices[static_cast<size_t>(cell[(i + 2) % n])];
            const double cross = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
            if (cross < -1e-12) throw ValidationError("partition: non-convex cell");
            const int ei = p.find_edge(cell[i], cell[(i + 1) % n]);
            if (ei < 0) throw ValidationError("partition: cell side is not a listed edge");
            auto& inc = p.edge_cells[static_cast<size_t>(ei)];
            if (inc[0] < 0)
                inc[0] = static_cast<int>(ci);
            else if (inc[1] < 0)
                inc[1] = static_cast<int>(ci);
            else
                throw ValidationError("partition: edge shared by more than two cells");
        }
    }

    const double oct_area = detail::octagon_area();
    if (std::abs(area_sum - oct_area) > 1e-9 * oct_area)
        throw ValidationError("partition: cell areas do not sum to the octagon area");

    // Boundary edges lie on octagon sides and belong to exactly one pair.
    const FundamentalOctagon& oct = bolza_octagon();
    p.edge_pair.assign(ne, -1);
    for (size_t i = 0; i < ne; ++i) {
        if (p.edge_cells[i][0] < 0) throw ValidationError("partition: dangling edge");
        if (p.edge_cells[i][1] >= 0) continue;  // interior
        const DiskPoint& a = p.vertices[static_cast<size_t>(p.edges[i].v0)];
        const DiskPoint& b = p.vertices[static_cast<size_t>(p.edges[i].v1)];
        bool on_side = false;
        for (const KleinChord& side : oct.sides) {
            if (std::abs(side.eval(a.x, a.y)) <= 1e-8 && std::abs(side.eval(b.x, b.y)) <= 1e-8)
                on_side = true;
        }
        if (!on_side) throw ValidationError("partition: boundary edge not on an octagon side");
    }
    for (size_t pi = 0; pi < p.boundary_pairs.size(); ++pi) {
        const BoundaryPair& bp = p.boundary_pairs[pi];
        for (int ei : {bp.edge, bp.partner}) {
            if (ei < 0 || ei >= static_cast<int>(ne))
                throw ValidationError("partition: boundary pair references a missing edge");
            if (p.edge_cells[static_cast<size_t>(ei)][1] >= 0)
                throw ValidationError("partition: boundary pair references an interior edge");
            if (p.edge_pair[static_cast<size_t>(ei)] >= 0)
                throw ValidationError("partition: edge appears in two boundary pairs");
            p.edge_pair[static_cast<size_t>(ei)] = static_cast<int>(pi);
        }
        if (bp.generator < 0 || bp.generator > 7)
            throw ValidationError("partition: boundary pair generator out of range");
        const GroupElement& g = bolza_generator(bp.generator);
        const PartitionEdge& e = p.edges[static_cast<size_t>(bp.edge)];
        const PartitionEdge& f = p.edges[static_cast<size_t>(bp.partner)];
        const DiskPoint i0 = group_apply(g, p.vertices[static_cast<size_t>(e.v0)]);
        const DiskPoint i1 = group_apply(g, p.vertices[static_cast<size_t>(e.v1)]);
        const DiskPoint& t0 = p.vertices[static_cast<size_t>(bp.flip ? f.v1 : f.v0)];
        const DiskPoint& t1 = p.vertices[static_cast<size_t>(bp.flip ? f.v0 : f.v1)];
        if (std::hypot(i0.x - t0.x, i0.y - t0.y) > pair_tol ||
            std::hypot(i1.x - t1.x, i1.y - t1.y) > pair_tol)
            throw ValidationError("partition: boundary pair endpoints do not match under the generator");
    }
    for (size_t i = 0; i < ne; ++i) {
        if (p.edge_cells[i][1] < 0 && p.edge_pair[i] < 0)
            throw ValidationError("partition: boundary edge missing from the pairing");
    }
    p.validated = true;
}

// Star triangulation of the octagon: 8 triangles fanning from the center,
// sides paired by the runtime side-pairing table.
inline Partition default_triangulation() {
    const FundamentalOctagon& oct = bolza_octagon();
    Partition p;
    p.vertices.push_back(klein_point(0, 0));
    for (int k = 0; k < 8; ++k) p.vertices.push_back(oct.corners[static_cast<size_t>(k)]);
    for (int k = 0; k < 8; ++k) p.edges.push_back({0, 1 + k, {}});                     // spokes
    for (int k = 0; k < 8; ++k) p.edges.push_back({1 + k, 1 + (k + 1) % 8, {}});       // sides
    for (int k = 0; k < 8; ++k) p.cells.push_back({0, 1 + k, 1 + (k + 1) % 8});
    for (const SidePairing& sp : side_pairings()) {
        if (sp.side >= sp.partner) continue;
        p.boundary_pairs.push_back({8 + sp.side, 8 + sp.partner, sp.generator, sp.flip});
    }
    validate(p, 1e-10);
    return p;
}

struct CellLocation {
    int cell = -1;
    int edge = -1;    // global edge index when the point sits on a cell edge
    int vertex = -1;  // vertex index when the point sits on a vertex
};

// The unique cell owning p: cells are scanned in index order and the first
// closed polygon containing the point wins, which implements the
// lower-indexed-cell tie break on shared edges and vertices.
inline CellLocation locate_cell(const Partition& p, const DiskPoint& q, double tol = 1e-10) {
    require_model(q, DiskModel::Klein, "locate_cell");
    if (contains(q, tol).kind == OctLocation::Kind::Outside)
        throw ValidationError("locate_cell: point outside the fundamental octagon");
    for (size_t ci = 0; ci < p.cells.size(); ++ci) {
        const std::vector<int>& cell = p.cells[ci];
        const size_t n = cell.size();
        bool inside = true;
        for (size_t i = 0; i < n && inside; ++i) {
            const DiskPoint& a = p.vertices[static_cast<size_t>(cell[i])];
            const DiskPoint& b = p.vertices[static_cast<size_t>(cell[(i + 1) % n])];
            if ((b.x - a.x) * (q.y - a.y) - (b.y - a.y) * (q.x - a.x) < -tol) inside = false;
        }
        if (!inside) continue;
        CellLocation loc;
        loc.cell = static_cast<int>(ci);
        for (size_t i = 0; i < n; ++i) {
            const DiskPoint& a = p.vertices[static_cast<size_t>(cell[i])];
            if (std::hypot(q.x - a.x, q.y - a.y) <= tol) {
                loc.vertex = cell[i];
                break;
            }
        }
        if (loc.vertex < 0) {
            for (size_t i = 0; i < n; ++i) {
                const int ei = p.find_edge(cell[i], cell[(i + 1) % n]);
                if (ei >= 0 && std::abs(p.edges[static_cast<size_t>(ei)].line.eval(q.x, q.y)) <= tol) {
                    loc.edge = ei;
                    break;
                }
            }
        }
        return loc;
    }
    throw NumericError("locate_cell: no cell claims the point");
}

// Split every triangle into four at edge split points. Interior edges split
// at the Euclidean midpoint; the partner of a paired boundary edge splits at
// the generator image of the midpoint, so the refined partition stays exactly
// multiply periodic (projective maps do not preserve midpoints).
inline Partition refine(const Partition& p) {
    if (!p.validated) throw ValidationError("refine: partition must be validated");
    for (const auto& cell : p.cells)
        if (cell.size() != 3) throw ValidationError("refine: defined for triangulations only");

    const size_t ne = p.edges.size();
    std::vector<DiskPoint> split(ne);
    std::vector<bool> split_set(ne, false);
    for (size_t i = 0; i < ne; ++i) {
        const DiskPoint& a = p.vertices[static_cast<size_t>(p.edges[i].v0)];
        const DiskPoint& b = p.vertices[static_cast<size_t>(p.edges[i].v1)];
        split[i] = klein_point((a.x + b.x) / 2, (a.y + b.y) / 2);
        split_set[i] = true;
    }
    for (const BoundaryPair& bp : p.boundary_pairs)
        split[static_cast<size_t>(bp.partner)] =
            group_apply(bolza_generator(bp.generator), split[static_cast<size_t>(bp.edge)]);

    Partition r;
    r.vertices = p.vertices;
    std::vector<int> split_vertex(ne);
    for (size_t i = 0; i < ne; ++i) {
        split_vertex[i] = static_cast<int>(r.vertices.size());
        r.vertices.push_back(split[i]);
    }

    std::map<std::pair<int, int>, int> edge_index;
    auto add_edge = [&](int a, int b) {
        auto key = std::minmax(a, b);
        auto it = edge_index.find({key.first, key.second});
        if (it != edge_index.end()) return it->second;
        const int idx = static_cast<int>(r.edges.size());
        r.edges.push_back({a, b, {}});
        edge_index.emplace(std::pair<int, int>(key.first, key.second), idx);
        return idx;
    };

    for (const auto& cell : p.cells) {
        const int a = cell[0], b = cell[1], c = cell[2];
        const int mab = split_vertex[static_cast<size_t>(p.find_edge(a, b))];
        const int mbc = split_vertex[static_cast<size_t>(p.find_edge(b, c))];
        const int mca = split_vertex[static_cast<size_t>(p.find_edge(c, a))];
        add_edge(a, mab);
        add_edge(mab, b);
        add_edge(b, mbc);
        add_edge(mbc, c);
        add_edge(c, mca);
        add_edge(mca, a);
        add_edge(mab, mbc);
        add_edge(mbc, mca);
        add_edge(mca, mab);
        r.cells.push_back({a, mab, mca});
        r.cells.push_back({b, mbc, mab});
        r.cells.push_back({c, mca, mbc});
        r.cells.push_back({mab, mbc, mca});
    }

    // Child pairing: the stored endpoint order of a child edge depends on
    // which cell inserted it first, so the flip flag is recomputed from the
    // actual endpoints rather than inherited.
    auto make_pair = [&](int ea, int fb, int gen) {
        const GroupElement& g = bolza_generator(gen);
        const PartitionEdge& e = r.edges[static_cast<size_t>(ea)];
        const PartitionEdge& f = r.edges[static_cast<size_t>(fb)];
        const DiskPoint i0 = group_apply(g, r.vertices[static_cast<size_t>(e.v0)]);
        const DiskPoint& t0 = r.vertices[static_cast<size_t>(f.v0)];
        const DiskPoint& t1 = r.vertices[static_cast<size_t>(f.v1)];
        const bool flip = std::hypot(i0.x - t1.x, i0.y - t1.y) < std::hypot(i0.x - t0.x, i0.y - t0.y);
        r.boundary_pairs.push_back({ea, fb, gen, flip});
    };
    for (const BoundaryPair& bp : p.boundary_pairs) {
        const PartitionEdge& e = p.edges[static_cast<size_t>(bp.edge)];
        const PartitionEdge& f = p.edges[static_cast<size_t>(bp.partner)];
        const int m = split_vertex[static_cast<size_t>(bp.edge)];
        const int mp = split_vertex[static_cast<size_t>(bp.partner)];
        const int e0 = add_edge(e.v0, m), e1 = add_edge(m, e.v1);
        const int f0 = add_edge(f.v0, mp), f1 = add_edge(mp, f.v1);
        // g(e.v0) lands on f.v1 when the parent pair is flipped.
        make_pair(e0, bp.flip ? f1 : f0, bp.generator);
        make_pair(e1, bp.flip ? f0 : f1, bp.generator);
    }

    validate(r, 1e-9);
    return r;
}

}  // namespace hyperspline
