#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "moduli_git.hpp"
#include "puiseux.hpp"

namespace newton_moduli {

/// The point xi_{center, |t|^q}: the closed ball {x : v(x - center) >= q}.
/// The Gauss point is (0, 0); larger q means a smaller ball.
struct TypeIIPoint {
    PuiseuxSeries center;
    Rational q{0};

    static TypeIIPoint gauss() { return {}; }

    /// Whether x lies in the ball; throws when the truncation of x cannot tell.
    bool contains(const PuiseuxSeries& x) const
    {
        PuiseuxSeries diff = x - center;
        if (!diff.terms().empty() && diff.terms().begin()->first < q)
            return false;
        if (diff.order() && *diff.order() < q)
            throw Error(ErrorCode::UncertifiedReduction,
                        "cannot decide whether " + x.str() + " lies in " + str() + " at this truncation");
        return true;
    }

    bool contains(const TypeIIPoint& other) const { return other.q >= q && contains(other.center); }

    /// Reduction of x in the sphere at this point: the t^q coefficient of
    /// x - center, or infinity outside the ball.
    P1Point reduce(const PuiseuxSeries& x) const
    {
        if (!contains(x))
            return P1Point::infinity();
        PuiseuxSeries diff = x - center;
        if (!diff.knows(q))
            throw Error(ErrorCode::UncertifiedReduction,
                        "reduction of " + x.str() + " at " + str() + " needs a finer truncation");
        return P1Point(diff.coefficient(q));
    }

    /// `xi(0,1)`
    std::string str() const { return "xi(" + center.str() + "," + q.get_str() + ")"; }

    friend bool operator==(const TypeIIPoint& a, const TypeIIPoint& b) { return a.q == b.q && a.contains(b.center); }
};

struct TreeEdge {
    int child = 0;
    int parent = 0;
    Rational length;
};

/// Hull of the roots and infinity, reduced to its branch vertices. Vertex 0 is
/// the largest ball, where the end at infinity attaches.
struct BerkTree {
    std::vector<PuiseuxSeries> roots;
    std::vector<TypeIIPoint> vertices;
    std::vector<int> parent;       ///< -1 at vertex 0
    std::vector<int> root_vertex;  ///< smallest vertex containing each root

    int degree() const { return static_cast<int>(roots.size()); }

    std::vector<TreeEdge> edges() const
    {
        std::vector<TreeEdge> out;
        for (std::size_t v = 1; v < vertices.size(); ++v) {
            const int p = parent[v];
            out.push_back({static_cast<int>(v), p, Rational(vertices[v].q - vertices[static_cast<std::size_t>(p)].q)});
        }
        return out;
    }

    std::vector<int> children(int v) const
    {
        std::vector<int> out;
        for (std::size_t w = 0; w < vertices.size(); ++w)
            if (parent[w] == v)
                out.push_back(static_cast<int>(w));
        return out;
    }

    /// Number of roots in the ball of vertex v.
    int roots_below(int v) const
    {
        int k = 0;
        for (int r : root_vertex)
            for (int w = r; w != -1; w = parent[static_cast<std::size_t>(w)])
                if (w == v) {
                    ++k;
                    break;
                }
        return k;
    }

    int find(const TypeIIPoint& p) const
    {
        for (std::size_t v = 0; v < vertices.size(); ++v)
            if (vertices[v] == p)
                return static_cast<int>(v);
        return -1;
    }
};

/// Branch vertices of Hull(r_1, ..., r_d, infinity): the joins
/// xi(r_i, v(r_i - r_j)) of all pairs of roots.
inline BerkTree hull_vertices(const std::vector<PuiseuxSeries>& roots)
{
    if (roots.size() < 2)
        throw Error(ErrorCode::InvalidArgument, "a family needs at least two roots");
    BerkTree tree;
    tree.roots = roots;
    std::vector<TypeIIPoint> joins;
    for (std::size_t i = 0; i < roots.size(); ++i)
        for (std::size_t j = i + 1; j < roots.size(); ++j) {
            std::optional<Rational> v;
            try {
                v = (roots[i] - roots[j]).valuation();
            } catch (const Error&) {
                throw Error(ErrorCode::IndistinguishableRoots, "roots " + std::to_string(i + 1) + " and " +
                                                                   std::to_string(j + 1) +
                                                                   " agree up to their truncation");
            }
            if (!v)
                throw Error(ErrorCode::IndistinguishableRoots,
                            "roots " + std::to_string(i + 1) + " and " + std::to_string(j + 1) + " coincide");
            TypeIIPoint p{roots[i].below(*v), *v};
            if (std::find(joins.begin(), joins.end(), p) == joins.end())
                joins.push_back(p);
        }
    std::sort(joins.begin(), joins.end(), [](const TypeIIPoint& a, const TypeIIPoint& b) {
        if (a.q != b.q)
            return a.q < b.q;
        return a.center.str() < b.center.str();
    });
    tree.vertices = joins;

    const std::size_t n = joins.size();
    tree.parent.assign(n, -1);
    for (std::size_t v = 0; v < n; ++v) {
        int best = -1;
        for (std::size_t w = 0; w < n; ++w)
            if (w != v && joins[w].q < joins[v].q && joins[w].contains(joins[v].center) &&
                (best < 0 || joins[w].q > joins[static_cast<std::size_t>(best)].q))
                best = static_cast<int>(w);
        tree.parent[v] = best;
        if (best < 0 && v != 0)
            throw Error(ErrorCode::InvalidArgument, "internal: hull has two maximal vertices");
    }
    for (const auto& r : roots) {
        int best = -1;
        for (std::size_t w = 0; w < n; ++w)
            if (joins[w].contains(r) && (best < 0 || joins[w].q > joins[static_cast<std::size_t>(best)].q))
                best = static_cast<int>(w);
        if (best < 0)
            throw Error(ErrorCode::InvalidArgument, "internal: root outside the hull");
        tree.root_vertex.push_back(best);
    }
    return tree;
}

/// Multiset of reductions of the roots at xi; its Newton map is rho_xi(N).
inline RootDivisor reduction_at(const std::vector<PuiseuxSeries>& roots, const TypeIIPoint& xi)
{
    std::vector<P1Point> points;
    try {
        for (const auto& r : roots)
            points.push_back(xi.reduce(r));
    } catch (const Error& e) {
        throw Error(ErrorCode::UncertifiedReduction, e.what());
    }
    return RootDivisor::from_points(points);
}

struct VertexReport {
    int vertex = 0;
    RootDivisor reduction;
    StabilityVerdict verdict;
};

/// Interior of the edge from `child` up to `parent`: the k roots of the
/// child's ball collapse to one hole and the remaining d - k to the other.
struct EdgeReport {
    int child = 0;
    int parent = 0;
    int bounded = 0;
    RootDivisor reduction;
    Verdict verdict = Verdict::Unstable;
};

enum class LocusKind { UniqueStableVertex, SemistableRegion };

struct SemistableLocus {
    LocusKind kind = LocusKind::SemistableRegion;
    BerkTree tree;
    std::vector<VertexReport> vertices;
    std::vector<EdgeReport> edges;
    std::optional<int> stable_vertex;
    std::vector<int> region_vertices;  ///< indices into tree.vertices
    std::vector<int> region_edges;     ///< indices into edges (open interiors)

    /// `UniqueStableVertex(xi(0,-1))` or `SemistableRegion{xi(0,1), xi(0,0); (xi(0,1), xi(0,0))}`
    std::string str() const
    {
        if (kind == LocusKind::UniqueStableVertex)
            return "UniqueStableVertex(" + tree.vertices[static_cast<std::size_t>(*stable_vertex)].str() + ")";
        std::string s = "SemistableRegion{";
        for (std::size_t i = 0; i < region_vertices.size(); ++i)
            s += (i ? ", " : "") + tree.vertices[static_cast<std::size_t>(region_vertices[i])].str();
        s += ";";
        for (std::size_t i = 0; i < region_edges.size(); ++i) {
            const EdgeReport& e = edges[static_cast<std::size_t>(region_edges[i])];
            s += std::string(i ? ", " : " ") + "(" + tree.vertices[static_cast<std::size_t>(e.child)].str() + ", " +
                 tree.vertices[static_cast<std::size_t>(e.parent)].str() + ")";
        }
        return s + "}";
    }

    /// Every region edge comes with both endpoints: a union of closed segments.
    bool is_closed() const
    {
        for (int i : region_edges) {
            const EdgeReport& e = edges[static_cast<std::size_t>(i)];
            auto has = [&](int v) { return std::find(region_vertices.begin(), region_vertices.end(), v) != region_vertices.end(); };
            if (!has(e.child) || !has(e.parent))
                return false;
        }
        return true;
    }
};

namespace detail {

inline Verdict collapsed_verdict(int bounded, int d)
{
    return classify_newton(newton_from_divisor(RootDivisor({{P1Point(ExactScalar(0)), bounded},
                                                            {P1Point::infinity(), d - bounded}})))
        .verdict;
}

struct UnionFind {
    std::vector<int> up;
    explicit UnionFind(std::size_t n) : up(n) { std::iota(up.begin(), up.end(), 0); }
    int find(int x) { return up[static_cast<std::size_t>(x)] == x ? x : up[static_cast<std::size_t>(x)] = find(up[static_cast<std::size_t>(x)]); }
    void unite(int a, int b) { up[static_cast<std::size_t>(find(a))] = find(b); }
};

} // namespace detail

/// Points of the hull whose reduction is semistable. Vertex reductions come from
/// the roots; an edge interior reduces to the two-hole divisor {0:k, inf:d-k}.
/// The open rays towards the roots and towards infinity reduce to {0:1, inf:d-1}
/// and {0:d}, which are never semistable.
inline SemistableLocus semistable_locus(const std::vector<PuiseuxSeries>& roots)
{
    SemistableLocus locus;
    locus.tree = hull_vertices(roots);
    const BerkTree& tree = locus.tree;
    const int d = tree.degree();

    for (std::size_t v = 0; v < tree.vertices.size(); ++v) {
        RootDivisor div = reduction_at(roots, tree.vertices[v]);
        if (div.degree() != d)
            throw Error(ErrorCode::InvalidArgument, "internal: reduction lost multiplicity");
        locus.vertices.push_back({static_cast<int>(v), div, classify_newton(newton_from_divisor(div))});
    }
    for (const auto& e : tree.edges()) {
        const int k = tree.roots_below(e.child);
        RootDivisor div({{P1Point(ExactScalar(0)), k}, {P1Point::infinity(), d - k}});
        locus.edges.push_back({e.child, e.parent, k, div, detail::collapsed_verdict(k, d)});
    }
    if (is_semistable(detail::collapsed_verdict(1, d)) ||
        is_semistable(classify_newton(newton_from_divisor(RootDivisor({{P1Point(ExactScalar(0)), d}}))).verdict))
        throw Error(ErrorCode::InvalidArgument, "internal: an end of the hull reduces to a semistable map");

    std::vector<int> stable;
    for (const auto& r : locus.vertices)
        if (r.verdict.verdict == Verdict::Stable)
            stable.push_back(r.vertex);
    for (const auto& r : locus.vertices)
        if (r.verdict.verdict == Verdict::StrictlySemistable)
            locus.region_vertices.push_back(r.vertex);
    for (std::size_t i = 0; i < locus.edges.size(); ++i)
        if (is_semistable(locus.edges[i].verdict))
            locus.region_edges.push_back(static_cast<int>(i));

    if (!stable.empty()) {
        if (stable.size() != 1 || !locus.region_vertices.empty() || !locus.region_edges.empty())
            throw Error(ErrorCode::InvalidArgument, "internal: a stable reduction is not the only semistable point");
        locus.kind = LocusKind::UniqueStableVertex;
        locus.stable_vertex = stable.front();
        locus.region_vertices = stable;
        return locus;
    }
    if (locus.region_vertices.empty() && locus.region_edges.empty())
        throw Error(ErrorCode::InvalidArgument, "internal: no point of the hull has a semistable reduction");

    // connectedness: vertices and edge interiors as nodes of one graph
    const int nv = static_cast<int>(tree.vertices.size());
    detail::UnionFind uf(tree.vertices.size() + locus.edges.size());
    auto in_region = [&](int v) {
        return std::find(locus.region_vertices.begin(), locus.region_vertices.end(), v) != locus.region_vertices.end();
    };
    for (int i : locus.region_edges) {
        const EdgeReport& e = locus.edges[static_cast<std::size_t>(i)];
        if (in_region(e.child))
            uf.unite(nv + i, e.child);
        if (in_region(e.parent))
            uf.unite(nv + i, e.parent);
    }
    std::set<int> components;
    for (int v : locus.region_vertices)
        components.insert(uf.find(v));
    for (int i : locus.region_edges)
        components.insert(uf.find(nv + i));
    if (components.size() != 1)
        throw Error(ErrorCode::InvalidArgument, "internal: semistable region is disconnected");
    locus.kind = LocusKind::SemistableRegion;
    return locus;
}

// ---------------------------------------------------------------------------
// Trees of spheres and stable curves

/// Marks are labelled 0 for infinity and i for the root r_i (1-based).
struct SpecialPoint {
    enum class Kind { Mark, Node };
    P1Point position;
    Kind kind = Kind::Mark;
    int label = 0;  ///< mark label, or the neighbouring component for a node
};

struct Sphere {
    int vertex = 0;
    std::vector<SpecialPoint> points;
};

struct MarkedTreeOfSpheres {
    BerkTree tree;
    std::vector<Sphere> spheres;  ///< one per tree vertex, same order
};

inline MarkedTreeOfSpheres marked_tree(const std::vector<PuiseuxSeries>& roots)
{
    MarkedTreeOfSpheres t;
    t.tree = hull_vertices(roots);
    const BerkTree& tree = t.tree;
    try {
        for (std::size_t v = 0; v < tree.vertices.size(); ++v) {
            const TypeIIPoint& xi = tree.vertices[v];
            Sphere s{static_cast<int>(v), {}};
            for (std::size_t i = 0; i < roots.size(); ++i)
                if (tree.root_vertex[i] == static_cast<int>(v))
                    s.points.push_back({xi.reduce(roots[i]), SpecialPoint::Kind::Mark, static_cast<int>(i) + 1});
            for (int w : tree.children(static_cast<int>(v)))
                s.points.push_back({xi.reduce(tree.vertices[static_cast<std::size_t>(w)].center), SpecialPoint::Kind::Node, w});
            if (v == 0)
                s.points.push_back({P1Point::infinity(), SpecialPoint::Kind::Mark, 0});
            else
                s.points.push_back({P1Point::infinity(), SpecialPoint::Kind::Node, tree.parent[v]});
            for (std::size_t a = 0; a < s.points.size(); ++a)
                for (std::size_t b = a + 1; b < s.points.size(); ++b)
                    if (s.points[a].position == s.points[b].position)
                        throw Error(ErrorCode::InvalidArgument, "internal: two directions reduce to one point at " + xi.str());
            t.spheres.push_back(std::move(s));
        }
    } catch (const Error& e) {
        if (e.code() == ErrorCode::IndeterminateValuation)
            throw Error(ErrorCode::UncertifiedReduction, e.what());
        throw;
    }
    return t;
}

/// Nodal genus-zero curve: components glued at nodes, marks 0..n-1.
struct StableCurve {
    int marks = 0;
    std::vector<std::vector<SpecialPoint>> components;
    std::vector<std::pair<int, int>> nodes;

    std::string str() const
    {
        return std::to_string(marks) + " marks, " + std::to_string(nodes.size()) + " nodes, " +
               std::to_string(components.size()) + " components";
    }
};

inline StableCurve stable_curve(const MarkedTreeOfSpheres& t)
{
    StableCurve c;
    c.marks = t.tree.degree() + 1;
    for (const auto& s : t.spheres) {
        if (s.points.size() < 3)
            throw Error(ErrorCode::UnstableCurve, "component at " + t.tree.vertices[static_cast<std::size_t>(s.vertex)].str() +
                                                      " has fewer than three special points");
        c.components.push_back(s.points);
    }
    for (const auto& e : t.tree.edges())
        c.nodes.emplace_back(e.child, e.parent);
    return c;
}

inline StableCurve stable_curve(const std::vector<PuiseuxSeries>& roots) { return stable_curve(marked_tree(roots)); }

namespace detail {

// Marks reached from component c through special point p.
inline std::vector<int> marks_beyond(const StableCurve& curve, int c, const SpecialPoint& p)
{
    if (p.kind == SpecialPoint::Kind::Mark)
        return {p.label};
    std::vector<int> out;
    std::vector<std::pair<int, int>> stack{{p.label, c}};
    while (!stack.empty()) {
        auto [at, from] = stack.back();
        stack.pop_back();
        for (const auto& q : curve.components[static_cast<std::size_t>(at)]) {
            if (q.kind == SpecialPoint::Kind::Mark)
                out.push_back(q.label);
            else if (q.label != from)
                stack.emplace_back(q.label, at);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

using CanonicalComponent = std::pair<std::vector<std::vector<int>>, std::vector<P1Point>>;

// Special points keyed by the marks behind them; the first three keys are sent
// to 0, 1, infinity and the rest recorded exactly.
inline std::vector<CanonicalComponent> canonical_curve(const StableCurve& curve)
{
    std::vector<CanonicalComponent> out;
    for (std::size_t c = 0; c < curve.components.size(); ++c) {
        std::vector<std::pair<std::vector<int>, P1Point>> keyed;
        for (const auto& p : curve.components[c])
            keyed.emplace_back(marks_beyond(curve, static_cast<int>(c), p), p.position);
        std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        if (keyed.size() < 3)
            throw Error(ErrorCode::UnstableCurve, "component with fewer than three special points");
        Moebius m = Moebius::to_standard_triple(keyed[0].second, keyed[1].second, keyed[2].second);
        CanonicalComponent cc;
        for (std::size_t i = 0; i < keyed.size(); ++i) {
            cc.first.push_back(keyed[i].first);
            if (i >= 3)
                cc.second.push_back(m(keyed[i].second));
        }
        out.push_back(std::move(cc));
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace detail

/// Isomorphism of labelled trees of spheres: same combinatorics and the same
/// cross-ratios on every component.
inline bool tree_equivalent(const StableCurve& a, const StableCurve& b)
{
    return a.marks == b.marks && detail::canonical_curve(a) == detail::canonical_curve(b);
}

inline bool tree_equivalent(const MarkedTreeOfSpheres& a, const MarkedTreeOfSpheres& b)
{
    return tree_equivalent(stable_curve(a), stable_curve(b));
}

/// Image of the curve under the forgetful map to the four-pointed moduli
/// space, identified with P^1: the position of mark e once a, b, c sit at
/// infinity, 0, 1. A node separating {e, b} from {a, c} gives 0, {e, c} gives
/// 1, {e, a} gives infinity.
inline P1Point forgetful_coordinate(const StableCurve& curve, int a, int b, int c, int e)
{
    const std::array<int, 4> labels{a, b, c, e};
    for (std::size_t k = 0; k < curve.components.size(); ++k) {
        const auto& comp = curve.components[k];
        std::array<std::optional<P1Point>, 4> dir;
        for (const auto& p : comp) {
            auto behind = detail::marks_beyond(curve, static_cast<int>(k), p);
            for (std::size_t j = 0; j < 4; ++j)
                if (std::find(behind.begin(), behind.end(), labels[j]) != behind.end())
                    dir[j] = p.position;
        }
        if (!dir[0] || !dir[1] || !dir[2] || !dir[3])
            throw Error(ErrorCode::InvalidArgument, "mark label out of range");
        std::set<P1Point> distinct{*dir[0], *dir[1], *dir[2], *dir[3]};
        if (distinct.size() == 4)
            return Moebius::to_standard_triple(*dir[1], *dir[2], *dir[0])(*dir[3]);
        if (distinct.size() == 3) {
            // exactly one pair shares a direction; it is one side of the split
            auto together = [&](std::size_t x, std::size_t y) { return *dir[x] == *dir[y]; };
            if (together(3, 1) || together(0, 2))
                return P1Point(ExactScalar(0));
            if (together(3, 2) || together(0, 1))
                return P1Point(ExactScalar(1));
            return P1Point::infinity();
        }
    }
    throw Error(ErrorCode::InvalidArgument, "internal: no component separates the four marks");
}

// ---------------------------------------------------------------------------
// kappa

/// GIT class of the semistable reductions; every semistable point of the hull
/// is checked to give the same class.
inline GitClassDescriptor kappa(const std::vector<PuiseuxSeries>& roots)
{
    SemistableLocus locus = semistable_locus(roots);
    const int d = locus.tree.degree();
    std::optional<GitClassDescriptor> result;
    auto agree = [&](const GitClassDescriptor& g) {
        if (result && !(*result == g))
            throw Error(ErrorCode::InvalidArgument, "internal: semistable reductions disagree on the GIT class");
        result = g;
    };
    for (int v : locus.region_vertices)
        agree(git_class(newton_from_divisor(locus.vertices[static_cast<std::size_t>(v)].reduction)));
    for (int i : locus.region_edges)
        agree(git_class(newton_from_divisor(locus.edges[static_cast<std::size_t>(i)].reduction)));
    if (!result || result->degree != d)
        throw Error(ErrorCode::InvalidArgument, "internal: no GIT class for the family");
    return *result;
}

// ---------------------------------------------------------------------------
// DOT

namespace detail {

inline std::string dot_escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out;
}

inline std::string mark_name(int label) { return label == 0 ? "inf" : "r" + std::to_string(label); }

} // namespace detail

inline std::string to_dot(const BerkTree& tree)
{
    std::string s = "graph hull {\n";
    for (std::size_t v = 0; v < tree.vertices.size(); ++v)
        s += "  v" + std::to_string(v) + " [label=\"" + detail::dot_escape(tree.vertices[v].str()) + "\"];\n";
    for (const auto& e : tree.edges())
        s += "  v" + std::to_string(e.child) + " -- v" + std::to_string(e.parent) + " [label=\"" + e.length.get_str() + "\"];\n";
    for (std::size_t i = 0; i < tree.root_vertex.size(); ++i)
        s += "  r" + std::to_string(i + 1) + " [shape=point, xlabel=\"" + detail::dot_escape(tree.roots[i].str()) +
             "\"];\n  v" + std::to_string(tree.root_vertex[i]) + " -- r" + std::to_string(i + 1) + ";\n";
    s += "  inf [shape=point, xlabel=\"inf\"];\n  v0 -- inf;\n}\n";
    return s;
}

inline std::string to_dot(const MarkedTreeOfSpheres& t)
{
    std::string s = "graph spheres {\n  node [shape=box];\n";
    for (const auto& sphere : t.spheres) {
        std::string label = detail::dot_escape(t.tree.vertices[static_cast<std::size_t>(sphere.vertex)].str());
        for (const auto& p : sphere.points)
            if (p.kind == SpecialPoint::Kind::Mark)
                label += "\\n" + detail::mark_name(p.label) + " @ " + detail::dot_escape(p.position.str());
            else
                label += "\\nnode @ " + detail::dot_escape(p.position.str());
        s += "  v" + std::to_string(sphere.vertex) + " [label=\"" + label + "\"];\n";
    }
    for (const auto& e : t.tree.edges())
        s += "  v" + std::to_string(e.child) + " -- v" + std::to_string(e.parent) + ";\n";
    return s + "}\n";
}

} // namespace newton_moduli
