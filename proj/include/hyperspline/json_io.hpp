#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "hyperspline/bolza.hpp"
#include "hyperspline/partition.hpp"
#include "hyperspline/spline_space.hpp"

namespace hyperspline {

using nlohmann::json;

// AlgebraicNumber <-> 4-tuple of "num/den" strings.
inline void to_json(json& j, const AlgebraicNumber& a) {
    j = json::array();
    for (int i = 0; i < 4; ++i) j.push_back(rational_str(a.coeff(i)));
}

inline void from_json(const json& j, AlgebraicNumber& a) {
    if (!j.is_array() || j.size() != 4)
        throw ValidationError("algebraic number: expected a 4-tuple of rationals");
    a = AlgebraicNumber(rational_from_str(j[0].get<std::string>()),
                        rational_from_str(j[1].get<std::string>()),
                        rational_from_str(j[2].get<std::string>()),
                        rational_from_str(j[3].get<std::string>()));
}

inline void to_json(json& j, const DiskPoint& p) {
    j = json{{"x", p.x}, {"y", p.y}, {"model", model_name(p.model)}};
}

inline void from_json(const json& j, DiskPoint& p) {
    p.x = j.at("x").get<double>();
    p.y = j.at("y").get<double>();
    const std::string m = j.at("model").get<std::string>();
    if (m == "klein")
        p.model = DiskModel::Klein;
    else if (m == "poincare")
        p.model = DiskModel::Poincare;
    else
        throw ValidationError("disk point: unknown model tag '" + m + "'");
}

inline void to_json(json& j, const KleinChord& c) {
    j = json{{"u", c.u}, {"v", c.v}, {"r", c.r}};
}

inline void from_json(const json& j, KleinChord& c) {
    c = KleinChord(j.at("u").get<double>(), j.at("v").get<double>(), j.at("r").get<double>());
}

inline void to_json(json& j, const Collineation& g) {
    json m = json::array();
    for (int i = 0; i < 3; ++i) {
        json row = json::array();
        for (int k = 0; k < 3; ++k) row.push_back(g.matrix()(i, k));
        m.push_back(row);
    }
    j = json{{"matrix", m}};
    if (g.has_exact()) {
        json e = json::array();
        for (int i = 0; i < 3; ++i) {
            json row = json::array();
            for (int k = 0; k < 3; ++k) row.push_back(json(g.exact()(i, k)));
            e.push_back(row);
        }
        j["exact"] = e;
    }
}

inline void from_json(const json& j, Collineation& g) {
    if (j.contains("exact")) {
        Mat3<AlgebraicNumber> e;
        for (int i = 0; i < 3; ++i)
            for (int k = 0; k < 3; ++k) e(i, k) = j["exact"][i][k].get<AlgebraicNumber>();
        g = Collineation(e);
        return;
    }
    Mat3<double> m;
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) m(i, k) = j.at("matrix")[i][k].get<double>();
    g = Collineation(m);
}

// Partition document: coefficients and incidence are recomputed on load,
// never trusted from the file.
inline void to_json(json& j, const Partition& p) {
    json verts = json::array();
    for (const DiskPoint& v : p.vertices) verts.push_back(json::array({v.x, v.y}));
    json edges = json::array();
    for (const PartitionEdge& e : p.edges) edges.push_back(json{{"v", {e.v0, e.v1}}});
    json cells = json::array();
    for (const auto& c : p.cells) cells.push_back(c);
    json pairs = json::array();
    for (const BoundaryPair& bp : p.boundary_pairs)
        pairs.push_back(json{{"edge", bp.edge},
                             {"partner", bp.partner},
                             {"generator", bp.generator},
                             {"flip", bp.flip}});
    j = json{{"vertices", verts}, {"edges", edges}, {"cells", cells}, {"boundary_pairs", pairs}};
}

inline Partition load_partition(const json& j, double pair_tol = 1e-8) {
    Partition p;
    try {
        for (const json& v : j.at("vertices")) {
            if (!v.is_array() || v.size() != 2)
                throw ValidationError("partition: vertex must be an [x, y] pair");
            p.vertices.push_back(klein_point(v[0].get<double>(), v[1].get<double>()));
        }
        for (const json& e : j.at("edges")) {
            const json& idx = e.at("v");
            if (!idx.is_array() || idx.size() != 2)
                throw ValidationError("partition: edge must hold a vertex index pair");
            p.edges.push_back({idx[0].get<int>(), idx[1].get<int>(), {}});
        }
        for (const json& c : j.at("cells")) p.cells.push_back(c.get<std::vector<int>>());
        for (const json& bp : j.at("boundary_pairs"))
            p.boundary_pairs.push_back({bp.at("edge").get<int>(), bp.at("partner").get<int>(),
                                        bp.at("generator").get<int>(),
                                        bp.at("flip").get<bool>()});
    } catch (const json::exception& ex) {
        throw ValidationError(std::string("partition document: ") + ex.what());
    }
    validate(p, pair_tol);
    return p;
}

inline void from_json(const json& j, Partition& p) { p = load_partition(j); }

inline json tiling_to_json(const std::vector<TileCell>& cells, DiskModel model) {
    json out = json::array();
    for (const TileCell& c : cells) {
        json corners = json::array();
        for (const DiskPoint& k : c.corners) {
            const DiskPoint q = model == DiskModel::Klein ? k : klein_to_poincare(k);
            corners.push_back(json::array({q.x, q.y}));
        }
        json m = json::array();
        for (int i = 0; i < 3; ++i) {
            json row = json::array();
            for (int k = 0; k < 3; ++k) row.push_back(c.element.klein.matrix()(i, k));
            m.push_back(row);
        }
        out.push_back(json{{"word", c.element.word}, {"matrix", m}, {"corners", corners}});
    }
    return json{{"model", model_name(model)}, {"cells", out}};
}

inline json basis_to_json(const SplineBasis& basis) {
    json spec = json{{"degree", basis.spec.degree}, {"smooth", basis.spec.smoothness}};
    to_json(spec["partition"], *basis.spec.partition);
    json splines = json::array();
    for (const PeriodicSpline& s : basis.splines) {
        json pieces = json::array();
        for (const BivariatePolynomial& p : s.pieces) pieces.push_back(p.coeffs());
        splines.push_back(pieces);
    }
    return json{{"spec", spec},
                {"dimension", basis.dimension()},
                {"tolerance", basis.tol},
                {"residuals", json{{"max", basis.max_residual}}},
                {"splines", splines}};
}

inline SplineBasis basis_from_json(const json& j) {
    SplineBasis basis;
    try {
        const json& spec = j.at("spec");
        Partition part = load_partition(spec.at("partition"));
        basis.spec = make_spec(std::move(part), spec.at("degree").get<int>(),
                               spec.at("smooth").get<int>());
        basis.tol = j.value("tolerance", 1e-10);
        basis.max_residual = j.at("residuals").at("max").get<double>();
        const int per = basis.spec.coeffs_per_cell();
        for (const json& s : j.at("splines")) {
            PeriodicSpline ps{basis.spec, {}};
            if (static_cast<int>(s.size()) != basis.spec.cells())
                throw ValidationError("basis document: spline piece count mismatch");
            for (const json& piece : s) {
                if (static_cast<int>(piece.size()) != per)
                    throw ValidationError("basis document: coefficient count mismatch");
                BivariatePolynomial p(basis.spec.degree);
                p.coeffs() = piece.get<std::vector<double>>();
                ps.pieces.push_back(std::move(p));
            }
            basis.splines.push_back(std::move(ps));
        }
    } catch (const json::exception& ex) {
        throw ValidationError(std::string("basis document: ") + ex.what());
    }
    return basis;
}

}  // namespace hyperspline
