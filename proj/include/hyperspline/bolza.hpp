#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hyperspline/disk_models.hpp"
#include "hyperspline/errors.hpp"
#include "hyperspline/field.hpp"

namespace hyperspline {

constexpr double pi() { return 3.14159265358979323846; }

// cos(k pi/4) and sin(k pi/4) live in Q(beta): the only values are
// 0, +-1 and +-(beta^2 - 1)/2 = +-sqrt(2)/2.
inline AlgebraicNumber cos_kpi4(int k) {
    static const AlgebraicNumber h = AlgebraicNumber(Rational(-1, 2), 0, Rational(1, 2), 0);
    switch (((k % 8) + 8) % 8) {
        case 0: return AlgebraicNumber(1);
        case 1: return h;
        case 2: return AlgebraicNumber(0);
        case 3: return -h;
        case 4: return AlgebraicNumber(-1);
        case 5: return -h;
        case 6: return AlgebraicNumber(0);
        default: return h;
    }
}

inline AlgebraicNumber sin_kpi4(int k) { return cos_kpi4(k - 2); }

// One element of the Bolza group, carried in both models: the Poincare
// SU(1,1) matrix [[a, b], [conj b, conj a]] with exact field entries, and the
// induced Klein collineation (exact matrix + float shadow). The word is a
// shortest known generator sequence, freely reduced with g_k^-1 = g_{k+4}.
struct GroupElement {
    std::vector<int> word;
    FieldComplex a{AlgebraicNumber(1), AlgebraicNumber(0)};
    FieldComplex b{AlgebraicNumber(0), AlgebraicNumber(0)};
    Collineation klein = Collineation::identity_exact();

    bool is_identity() const { return word.empty() && b.is_zero(); }
};

inline GroupElement identity_element() { return GroupElement{}; }

// Poincare generator matrices: a = beta^2, b = sqrt(2) beta e^{i k pi/4},
// beta = sqrt(1 + sqrt 2). Determinant beta^4 - 2 beta^2 = 1 exactly.
inline const std::array<GroupElement, 8>& bolza_generators() {
    static const std::array<GroupElement, 8> gens = [] {
        std::array<GroupElement, 8> out;
        const AlgebraicNumber beta = AlgebraicNumber::beta();
        const AlgebraicNumber s2b = AlgebraicNumber::sqrt2() * beta;
        for (int k = 0; k < 8; ++k) {
            GroupElement g;
            g.word = {k};
            g.a = FieldComplex{beta * beta, AlgebraicNumber(0)};
            g.b = FieldComplex{s2b * cos_kpi4(k), s2b * sin_kpi4(k)};
            g.klein = su11_to_klein(g.a, g.b);
            out[static_cast<size_t>(k)] = std::move(g);
        }
        return out;
    }();
    return gens;
}

inline const GroupElement& bolza_generator(int k) {
    if (k < 0 || k > 7) throw ValidationError("bolza_generator: index must be in 0..7");
    return bolza_generators()[static_cast<size_t>(k)];
}

// The displayed closed form of the Klein generators, built directly from
// 3 + 2 sqrt 2, 2 + 2 sqrt 2, (2 + 2 sqrt 2)^{3/2} = 2 beta^3 + 2 beta and
// 5 + 4 sqrt 2; used to cross-check the SU(1,1) conversion.
inline Mat3<AlgebraicNumber> bolza_klein_formula(int k) {
    const AlgebraicNumber s2 = AlgebraicNumber::sqrt2();
    const AlgebraicNumber t32 = AlgebraicNumber(3) + 2 * s2;
    const AlgebraicNumber t22 = AlgebraicNumber(2) + 2 * s2;
    const AlgebraicNumber t22_32 = AlgebraicNumber(0, 2, 0, 2);
    const AlgebraicNumber t54 = AlgebraicNumber(5) + 4 * s2;
    const AlgebraicNumber ck2 = cos_kpi4(2 * k), sk2 = sin_kpi4(2 * k);
    const AlgebraicNumber ck = cos_kpi4(k), sk = sin_kpi4(k);
    Mat3<AlgebraicNumber> m;
    m(0, 0) = t32 + t22 * ck2;
    m(0, 1) = t22 * sk2;
    m(0, 2) = t22_32 * ck;
    m(1, 0) = t22 * sk2;
    m(1, 1) = t32 - t22 * ck2;
    m(1, 2) = t22_32 * sk;
    m(2, 0) = t22_32 * ck;
    m(2, 1) = t22_32 * sk;
    m(2, 2) = t54;
    return m;
}

inline GroupElement group_mul(const GroupElement& g, const GroupElement& h) {
    GroupElement r;
    r.word = g.word;
    for (int k : h.word) {
        if (!r.word.empty() && (r.word.back() + 4) % 8 == k)
            r.word.pop_back();
        else
            r.word.push_back(k);
    }
    // [[a1,b1],[~b1,~a1]] * [[a2,b2],[~b2,~a2]] stays in SU(1,1) form.
    r.a = g.a * h.a + g.b * h.b.conj();
    r.b = g.a * h.b + g.b * h.a.conj();
    r.klein = su11_to_klein(r.a, r.b);
    return r;
}

inline GroupElement group_inv(const GroupElement& g) {
    GroupElement r;
    r.word.reserve(g.word.size());
    for (auto it = g.word.rbegin(); it != g.word.rend(); ++it) r.word.push_back((*it + 4) % 8);
    r.a = g.a.conj();
    r.b = -g.b;
    r.klein = su11_to_klein(r.a, r.b);
    return r;
}

inline DiskPoint group_apply(const GroupElement& g, const DiskPoint& p) {
    return g.klein.apply(p);
}

// Fundamental octagon on the Klein disk: corners at radius
// (2 sqrt 2 - 2) 2^{1/4}, angles pi/8 + k pi/4. Side k joins corners k, k+1;
// its chord normal points away from the origin, so chord.eval > 0 is outside.
struct FundamentalOctagon {
    std::array<DiskPoint, 8> corners;
    std::array<KleinChord, 8> sides;
};

inline const FundamentalOctagon& bolza_octagon() {
    static const FundamentalOctagon oct = [] {
        FundamentalOctagon o;
        const double rho = (2.0 * std::sqrt(2.0) - 2.0) * std::pow(2.0, 0.25);
        for (int k = 0; k < 8; ++k) {
            const double ang = pi() / 8.0 + k * pi() / 4.0;
            o.corners[static_cast<size_t>(k)] = klein_point(rho * std::cos(ang), rho * std::sin(ang));
        }
        for (int k = 0; k < 8; ++k)
            o.sides[static_cast<size_t>(k)] =
                KleinChord::through(o.corners[static_cast<size_t>(k)],
                                    o.corners[static_cast<size_t>((k + 1) % 8)]);
        return o;
    }();
    return oct;
}

struct OctLocation {
    enum class Kind { Inside, OnSide, OnCorner, Outside };
    Kind kind = Kind::Inside;
    int index = -1;  // side index, corner index, or most-violated side
};

inline OctLocation contains(const FundamentalOctagon& oct, const DiskPoint& p,
                            double tol = 1e-10) {
    require_model(p, DiskModel::Klein, "contains");
    std::array<double, 8> d{};
    int worst = -1;
    for (int k = 0; k < 8; ++k) {
        d[static_cast<size_t>(k)] = oct.sides[static_cast<size_t>(k)].eval(p.x, p.y);
        if (d[static_cast<size_t>(k)] > tol && (worst < 0 || d[static_cast<size_t>(k)] > d[static_cast<size_t>(worst)]))
            worst = k;
    }
    if (worst >= 0) return {OctLocation::Kind::Outside, worst};
    int first = -1, count = 0;
    for (int k = 0; k < 8; ++k) {
        if (std::abs(d[static_cast<size_t>(k)]) <= tol) {
            if (first < 0) first = k;
            ++count;
        }
    }
    if (count == 0) return {OctLocation::Kind::Inside, -1};
    if (count == 1) return {OctLocation::Kind::OnSide, first};
    // Two adjacent sides meet at a corner: sides k and k+1 share corner k+1.
    for (int k = 0; k < 8; ++k) {
        const int kn = (k + 1) % 8;
        if (std::abs(d[static_cast<size_t>(k)]) <= tol && std::abs(d[static_cast<size_t>(kn)]) <= tol)
            return {OctLocation::Kind::OnCorner, kn};
    }
    return {OctLocation::Kind::OnSide, first};
}

inline OctLocation contains(const DiskPoint& p, double tol = 1e-10) {
    return contains(bolza_octagon(), p, tol);
}

// Which generator carries side k onto which partner side, discovered
// numerically: the text identifies opposite sides but not the endpoint
// orientation. flip means g(corner k) lands on the high end of the partner.
struct SidePairing {
    int side = -1;
    int partner = -1;
    int generator = -1;
    bool flip = false;
};

inline const std::array<SidePairing, 8>& side_pairings() {
    static const std::array<SidePairing, 8> table = [] {
        const FundamentalOctagon& oct = bolza_octagon();
        std::array<SidePairing, 8> out;
        std::array<bool, 8> seen_source{};
        std::array<bool, 8> seen_target{};
        const double tol = 1e-8;
        auto near = [&](const DiskPoint& a, const DiskPoint& b) {
            return std::abs(a.x - b.x) <= tol && std::abs(a.y - b.y) <= tol;
        };
        for (int k = 0; k < 8; ++k) {
            const GroupElement& g = bolza_generator(k);
            for (int s = 0; s < 8; ++s) {
                const DiskPoint i0 = group_apply(g, oct.corners[static_cast<size_t>(s)]);
                const DiskPoint i1 = group_apply(g, oct.corners[static_cast<size_t>((s + 1) % 8)]);
                for (int t = 0; t < 8; ++t) {
                    const DiskPoint& c0 = oct.corners[static_cast<size_t>(t)];
                    const DiskPoint& c1 = oct.corners[static_cast<size_t>((t + 1) % 8)];
                    const bool direct = near(i0, c0) && near(i1, c1);
                    const bool flipped = near(i0, c1) && near(i1, c0);
                    if (!direct && !flipped) continue;
                    if (seen_source[static_cast<size_t>(s)])
                        throw NumericError("side_pairings: side paired twice");
                    seen_source[static_cast<size_t>(s)] = true;
                    seen_target[static_cast<size_t>(t)] = true;
                    out[static_cast<size_t>(s)] = {s, t, k, flipped};
                }
            }
        }
        for (int s = 0; s < 8; ++s)
            if (!seen_source[static_cast<size_t>(s)] || !seen_target[static_cast<size_t>(s)])
                throw NumericError("side_pairings: incomplete pairing");
        return out;
    }();
    return table;
}

namespace detail {

inline std::string exact_key(const Collineation& g) {
    const Mat3<AlgebraicNumber> n = g.normalized_exact();
    std::string key;
    for (const auto& v : n.m) {
        key += v.str();
        key += ';';
    }
    return key;
}

inline std::string float_key(const Mat3<double>& m, double quantum = 1e-9) {
    // Normalize by the first largest-magnitude entry, then round.
    int best = 0;
    for (int i = 1; i < 9; ++i)
        if (std::abs(m.m[static_cast<size_t>(i)]) > std::abs(m.m[static_cast<size_t>(best)]))
            best = i;
    const double s = m.m[static_cast<size_t>(best)];
    std::string key;
    for (const auto& v : m.m) {
        key += std::to_string(std::llround(v / s / quantum));
        key += ';';
    }
    return key;
}

}  // namespace detail

// All distinct group elements with a word of length <= max_word_length,
// deduplicated by exact up-to-scalar matrix equality. Breadth-first, so the
// stored word is a shortest witness; expansion order is fixed, so the result
// is deterministic.
inline std::vector<GroupElement> enumerate_elements(int max_word_length) {
    if (max_word_length < 0)
        throw ValidationError("enumerate_elements: negative word length");
    std::vector<GroupElement> out;
    std::unordered_set<std::string> seen;
    out.push_back(identity_element());
    seen.insert(detail::exact_key(out[0].klein));
    size_t layer_begin = 0;
    for (int len = 1; len <= max_word_length; ++len) {
        const size_t layer_end = out.size();
        for (size_t i = layer_begin; i < layer_end; ++i) {
            for (int k = 0; k < 8; ++k) {
                if (!out[i].word.empty() && (out[i].word.back() + 4) % 8 == k) continue;
                GroupElement h = group_mul(out[i], bolza_generator(k));
                std::string key = detail::exact_key(h.klein);
                if (seen.insert(std::move(key)).second) out.push_back(std::move(h));
            }
        }
        layer_begin = layer_end;
    }
    return out;
}

// Independent dedup oracle: same breadth-first walk, but elements are
// identified by a hash of the normalized float matrix rounded to `quantum`.
inline size_t count_elements_float(int max_word_length, double quantum = 1e-9) {
    std::vector<std::pair<std::vector<int>, Mat3<double>>> frontier;
    std::unordered_set<std::string> seen;
    frontier.push_back({{}, Mat3<double>::identity()});
    seen.insert(detail::float_key(frontier[0].second, quantum));
    size_t count = 1;
    for (int len = 1; len <= max_word_length; ++len) {
        std::vector<std::pair<std::vector<int>, Mat3<double>>> next;
        for (const auto& [word, m] : frontier) {
            for (int k = 0; k < 8; ++k) {
                if (!word.empty() && (word.back() + 4) % 8 == k) continue;
                Mat3<double> prod = m * bolza_generator(k).klein.matrix();
                std::string key = detail::float_key(prod, quantum);
                if (!seen.insert(std::move(key)).second) continue;
                ++count;
                std::vector<int> w = word;
                w.push_back(k);
                next.push_back({std::move(w), prod});
            }
        }
        frontier = std::move(next);
    }
    return count;
}

// Short words equal to the identity, found as breadth-first collisions.
// Diagnostics only; the defining relation is not asserted anywhere.
inline std::vector<std::vector<int>> find_relations(int max_length) {
    const int half = max_length / 2;
    std::vector<GroupElement> out;
    std::unordered_map<std::string, size_t> seen;
    std::vector<std::vector<int>> relations;
    std::unordered_set<std::string> rel_seen;
    out.push_back(identity_element());
    seen.emplace(detail::exact_key(out[0].klein), 0);
    size_t layer_begin = 0;
    for (int len = 1; len <= half; ++len) {
        const size_t layer_end = out.size();
        for (size_t i = layer_begin; i < layer_end; ++i) {
            for (int k = 0; k < 8; ++k) {
                if (!out[i].word.empty() && (out[i].word.back() + 4) % 8 == k) continue;
                GroupElement h = group_mul(out[i], bolza_generator(k));
                auto [it, inserted] = seen.emplace(detail::exact_key(h.klein), out.size());
                if (inserted) {
                    out.push_back(std::move(h));
                    continue;
                }
                // h equals out[it->second]: witness^-1 * h is a relation.
                GroupElement rel = group_mul(group_inv(out[it->second]), h);
                if (rel.word.empty()) continue;
                std::string rkey;
                for (int w : rel.word) rkey += static_cast<char>('0' + w);
                if (rel_seen.insert(rkey).second) relations.push_back(rel.word);
            }
        }
        layer_begin = layer_end;
    }
    std::sort(relations.begin(), relations.end(),
              [](const auto& a, const auto& b) {
                  return a.size() != b.size() ? a.size() < b.size() : a < b;
              });
    return relations;
}

struct TileCell {
    GroupElement element;
    std::array<DiskPoint, 8> corners;  // Klein model
};

// Images of the fundamental octagon under every element of word length <= depth.
inline std::vector<TileCell> tile(int depth) {
    if (depth < 0) throw ValidationError("tile: negative depth");
    if (depth > 5) throw ValidationError("tile: depth > 5 not supported");
    const FundamentalOctagon& oct = bolza_octagon();
    std::vector<TileCell> cells;
    for (GroupElement& g : enumerate_elements(depth)) {
        TileCell c;
        for (int k = 0; k < 8; ++k)
            c.corners[static_cast<size_t>(k)] = group_apply(g, oct.corners[static_cast<size_t>(k)]);
        c.element = std::move(g);
        cells.push_back(std::move(c));
    }
    return cells;
}

struct CanonicalPoint {
    GroupElement g;
    DiskPoint q;  // q = g(p), inside the fundamental domain
};

namespace detail {

// Element carrying corner c to corner 0, by BFS over the corner moves the
// side pairings induce.
inline const std::array<GroupElement, 8>& corner_to_zero() {
    static const std::array<GroupElement, 8> table = [] {
        // moves[c] = list of (generator, image corner)
        std::array<std::vector<std::pair<int, int>>, 8> moves;
        for (const SidePairing& sp : side_pairings()) {
            const int c0 = sp.side, c1 = (sp.side + 1) % 8;
            const int t0 = sp.flip ? (sp.partner + 1) % 8 : sp.partner;
            const int t1 = sp.flip ? sp.partner : (sp.partner + 1) % 8;
            moves[static_cast<size_t>(c0)].push_back({sp.generator, t0});
            moves[static_cast<size_t>(c1)].push_back({sp.generator, t1});
        }
        std::array<std::optional<GroupElement>, 8> to_zero;
        to_zero[0] = identity_element();
        std::deque<int> queue{0};
        while (!queue.empty()) {
            const int c = queue.front();
            queue.pop_front();
            // If g maps c' -> c and h maps c -> 0, then h g maps c' -> 0.
            for (int cp = 0; cp < 8; ++cp) {
                if (to_zero[static_cast<size_t>(cp)]) continue;
                for (const auto& [gen, img] : moves[static_cast<size_t>(cp)]) {
                    if (img != c) continue;
                    to_zero[static_cast<size_t>(cp)] =
                        group_mul(*to_zero[static_cast<size_t>(c)], bolza_generator(gen));
                    queue.push_back(cp);
                    break;
                }
            }
        }
        std::array<GroupElement, 8> out;
        for (int c = 0; c < 8; ++c) {
            if (!to_zero[static_cast<size_t>(c)])
                throw NumericError("corner orbit does not reach corner 0");
            out[static_cast<size_t>(c)] = *to_zero[static_cast<size_t>(c)];
        }
        return out;
    }();
    return table;
}

}  // namespace detail

// Map an arbitrary interior point into the fundamental domain. Greedy
// descent: while outside, apply the generator whose image is closest to the
// origin; each step strictly shrinks the hyperbolic distance to the center.
// The boundary is then normalized to the half-open convention: a point on
// side k belongs to the domain iff k in {0,1,2,3}; corner points are moved to
// corner 0.
inline CanonicalPoint canonicalize(const DiskPoint& p, double tol = 1e-10) {
    require_model(p, DiskModel::Klein, "canonicalize");
    if (!p.interior()) throw ValidationError("canonicalize: point outside the open unit disk");

    const double u = klein_to_poincare(p).radius();
    const double dist = 2.0 * std::atanh(std::min(u, 1.0 - 1e-16));
    int budget = 32 + static_cast<int>(10.0 * dist);

    GroupElement acc = identity_element();
    DiskPoint cur = p;
    while (contains(cur, tol).kind == OctLocation::Kind::Outside) {
        if (--budget < 0)
            throw NumericError("canonicalize: iteration cap hit (tolerance failure near a boundary)");
        int best = -1;
        double best_r2 = cur.radius2();
        for (int k = 0; k < 8; ++k) {
            const DiskPoint img = group_apply(bolza_generator(k), cur);
            if (img.radius2() < best_r2) {
                best = k;
                best_r2 = img.radius2();
            }
        }
        if (best < 0)
            throw NumericError("canonicalize: no generator decreases the radius");
        acc = group_mul(bolza_generator(best), acc);
        cur = group_apply(acc, p);
    }

    for (int pass = 0; pass < 8; ++pass) {
        const OctLocation loc = contains(cur, tol);
        if (loc.kind == OctLocation::Kind::OnSide && loc.index >= 4) {
            const SidePairing& sp = side_pairings()[static_cast<size_t>(loc.index)];
            acc = group_mul(bolza_generator(sp.generator), acc);
            cur = group_apply(acc, p);
            continue;
        }
        if (loc.kind == OctLocation::Kind::OnCorner && loc.index != 0) {
            acc = group_mul(detail::corner_to_zero()[static_cast<size_t>(loc.index)], acc);
            cur = group_apply(acc, p);
            continue;
        }
        if (loc.kind == OctLocation::Kind::Outside) {
            // Rounding pushed the point just past a side; fall back on greedy.
            if (--budget < 0) throw NumericError("canonicalize: oscillation near the boundary");
            acc = group_mul(bolza_generator(side_pairings()[static_cast<size_t>(loc.index)].generator), acc);
            cur = group_apply(acc, p);
            continue;
        }
        return {acc, cur};
    }
    throw NumericError("canonicalize: boundary normalization did not settle");
}

}  // namespace hyperspline
