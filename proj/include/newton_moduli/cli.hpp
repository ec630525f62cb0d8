#pragma once

#include <cctype>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "berkovich.hpp"
#include "iteration.hpp"
#include "measures.hpp"

namespace newton_moduli {

namespace detail {

// form   := ['+'|'-'] term (('+'|'-') term)*
// term   := factor (['*'] factor)*          (juxtaposition multiplies)
// factor := number ['/' number] | 'i' | ('X'|'Y') ['^' natural] | '(' form ')' ['^' natural]
// pair   := [term] '[' form ':' form ']'
class PairParser {
public:
    using Poly = std::map<std::pair<int, int>, ExactScalar>;

    explicit PairParser(std::string_view text) : text_(text) {}

    HomogeneousPair parse()
    {
        skip();
        std::optional<Poly> h;
        if (!peek('['))
            h = term();
        expect('[');
        std::size_t a_at = pos_;
        Poly a = form();
        expect(':');
        std::size_t b_at = pos_;
        Poly b = form();
        expect(']');
        skip();
        if (pos_ != text_.size())
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        std::optional<int> da = degree_of(a, a_at), db = degree_of(b, b_at);
        if (!da && !db)
            fail("both forms vanish", a_at);
        const int d = da ? *da : *db;
        if (da && db && *da != *db)
            fail("forms of different degrees", b_at);
        HomogeneousForm fa = to_form(a, d), fb = to_form(b, d);
        if (!h)
            return {fa, fb};
        std::optional<int> dh = degree_of(*h, 0);
        if (!dh)
            fail("zero common factor", 0);
        return HomogeneousPair::from_factored(to_form(*h, *dh), fa, fb);
    }

private:
    [[noreturn]] void fail(const std::string& what) const { fail(what, pos_); }
    [[noreturn]] void fail(const std::string& what, std::size_t at) const
    {
        throw ParseError(what + " at position " + std::to_string(at), at);
    }

    void skip()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }
    bool peek(char c)
    {
        skip();
        return pos_ < text_.size() && text_[pos_] == c;
    }
    bool accept(char c)
    {
        if (!peek(c))
            return false;
        ++pos_;
        return true;
    }
    void expect(char c)
    {
        if (!accept(c))
            fail(std::string("expected '") + c + "'");
    }

    long natural()
    {
        skip();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        if (start == pos_ || pos_ - start > 6)
            fail("expected a small number", start);
        return std::stol(std::string(text_.substr(start, pos_ - start)));
    }

    static Poly times(const Poly& a, const Poly& b)
    {
        Poly out;
        for (const auto& [ea, ca] : a)
            for (const auto& [eb, cb] : b)
                out[{ea.first + eb.first, ea.second + eb.second}] += ca * cb;
        return out;
    }
    static Poly plus(Poly a, const Poly& b, bool negate)
    {
        for (const auto& [e, c] : b)
            a[e] += negate ? -c : c;
        return a;
    }
    static Poly constant(ExactScalar c) { return {{{0, 0}, std::move(c)}}; }

    Poly form()
    {
        bool negate = accept('-');
        if (!negate)
            accept('+');
        Poly p = term();
        if (negate)
            p = plus({}, p, true);
        for (;;) {
            if (accept('+'))
                p = plus(p, term(), false);
            else if (accept('-'))
                p = plus(p, term(), true);
            else
                return p;
        }
    }

    bool starts_factor()
    {
        skip();
        if (pos_ >= text_.size())
            return false;
        char c = text_[pos_];
        return std::isdigit(static_cast<unsigned char>(c)) || c == 'i' || c == 'X' || c == 'Y' || c == '(';
    }

    Poly term()
    {
        Poly p = factor();
        for (;;) {
            if (accept('*'))
                p = times(p, factor());
            else if (starts_factor())
                p = times(p, factor());
            else
                return p;
        }
    }

    Poly factor()
    {
        skip();
        if (pos_ >= text_.size())
            fail("unexpected end of input");
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            Rational v(natural());
            if (accept('/')) {
                std::size_t at = pos_;
                long den = natural();
                if (den == 0)
                    fail("zero denominator", at);
                v /= den;
            }
            return constant(ExactScalar(v));
        }
        if (c == 'i') {
            ++pos_;
            return constant(ExactScalar::i());
        }
        if (c == 'X' || c == 'Y') {
            ++pos_;
            int e = accept('^') ? static_cast<int>(natural()) : 1;
            return c == 'X' ? Poly{{{e, 0}, ExactScalar(1)}} : Poly{{{0, e}, ExactScalar(1)}};
        }
        if (accept('(')) {
            Poly p = form();
            expect(')');
            if (accept('^')) {
                long k = natural();
                Poly r = constant(ExactScalar(1));
                for (long j = 0; j < k; ++j)
                    r = times(r, p);
                return r;
            }
            return p;
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::optional<int> degree_of(const Poly& p, std::size_t at) const
    {
        std::optional<int> d;
        for (const auto& [e, c] : p) {
            if (c.is_zero())
                continue;
            if (d && *d != e.first + e.second)
                fail("form is not homogeneous", at);
            d = e.first + e.second;
        }
        return d;
    }

    static HomogeneousForm to_form(const Poly& p, int d)
    {
        std::vector<ExactScalar> coeffs(static_cast<std::size_t>(d) + 1);
        for (const auto& [e, c] : p)
            if (!c.is_zero())
                coeffs[static_cast<std::size_t>(e.first)] += c;
        return HomogeneousForm(d, std::move(coeffs));
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Parse a pair literal such as `XY[X:2Y]` or `[X^2*Y : 2*X*Y^2]`.
inline HomogeneousPair parse_pair(std::string_view text) { return detail::PairParser(text).parse(); }

namespace cli {

using Json = nlohmann::ordered_json;

inline constexpr int schema_version = 1;

/// A constant divisor, a family of Puiseux roots, or an explicit pair.
struct Input {
    enum class Kind { Divisor, Family, Pair };
    Kind kind = Kind::Divisor;
    std::string text;
    std::optional<RootDivisor> divisor;
    std::vector<PuiseuxSeries> family;
    std::optional<HomogeneousPair> pair;
};

namespace detail {

inline std::string trim(std::string_view s)
{
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a])))
        ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1])))
        --b;
    return std::string(s.substr(a, b - a));
}

inline bool is_infinity_literal(const std::string& s) { return s == "inf" || s == "oo" || s == "∞"; }

inline bool is_constant(const PuiseuxSeries& s)
{
    for (const auto& [e, c] : s.terms())
        if (e != 0)
            return false;
    return true;
}

// Comma separated entries `point` or `point:multiplicity`, optionally in braces.
inline Input parse_root_list(const std::string& text, const Rational& order)
{
    Input in;
    in.text = text;
    std::size_t start = 0;
    std::size_t end = text.size();
    {
        std::size_t a = text.find_first_not_of(" \t\n");
        std::size_t b = text.find_last_not_of(" \t\n");
        if (a != std::string::npos && text[a] == '{') {
            if (b == std::string::npos || text[b] != '}')
                throw ParseError("missing '}'", text.size());
            start = a + 1;
            end = b;
        }
    }
    struct Entry {
        std::optional<PuiseuxSeries> value;  // empty at infinity
        int multiplicity = 1;
        std::size_t at = 0;
    };
    std::vector<Entry> entries;
    while (start <= end) {
        std::size_t comma = text.find(',', start);
        if (comma == std::string::npos || comma > end)
            comma = end;
        std::string piece = text.substr(start, comma - start);
        Entry e;
        e.at = start;
        std::string point = piece;
        if (auto colon = piece.rfind(':'); colon != std::string::npos) {
            point = piece.substr(0, colon);
            std::string m = trim(piece.substr(colon + 1));
            if (m.empty() || m.find_first_not_of("0123456789") != std::string::npos || m.size() > 6 || std::stoi(m) == 0)
                throw ParseError("bad multiplicity at position " + std::to_string(start + colon + 1), start + colon + 1);
            e.multiplicity = std::stoi(m);
        }
        std::string p = trim(point);
        if (p.empty())
            throw ParseError("empty entry at position " + std::to_string(start), start);
        if (!is_infinity_literal(p)) {
            try {
                e.value = parse_series(point, order);
            } catch (const ParseError& pe) {
                const std::size_t at = start + pe.position();
                throw ParseError("bad root literal at position " + std::to_string(at), at);
            }
        }
        entries.push_back(std::move(e));
        start = comma + 1;
        if (comma == end)
            break;
    }

    bool constant = true;
    for (const auto& e : entries)
        if (e.value && !is_constant(*e.value))
            constant = false;
    if (constant) {
        std::vector<RootDivisor::Entry> d;
        for (const auto& e : entries)
            d.emplace_back(e.value ? P1Point(e.value->coefficient(Rational(0))) : P1Point::infinity(), e.multiplicity);
        in.kind = Input::Kind::Divisor;
        in.divisor = RootDivisor(d);
        return in;
    }
    for (const auto& e : entries) {
        if (!e.value)
            throw ParseError("infinity is the implicit extra mark of a family (position " + std::to_string(e.at) + ")", e.at);
        if (e.multiplicity != 1)
            throw ParseError("family roots must be listed one by one (position " + std::to_string(e.at) + ")", e.at);
    }
    in.kind = Input::Kind::Family;
    for (const auto& e : entries)
        in.family.push_back(*e.value);
    return in;
}

inline Input parse_input_json(const std::string& path, const Rational& order)
{
    std::ifstream f(path);
    if (!f)
        throw Error(ErrorCode::IoError, "cannot read " + path);
    Json j;
    try {
        j = Json::parse(f);
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string("invalid JSON in ") + path + ": " + e.what(), e.byte);
    }
    Rational o = order;
    if (j.contains("order"))
        o = Rational(j.at("order").get<long>());
    Input in;
    if (j.contains("pair")) {
        in.kind = Input::Kind::Pair;
        in.text = j.at("pair").get<std::string>();
        in.pair = parse_pair(in.text);
        return in;
    }
    if (!j.contains("roots") || !j.at("roots").is_array())
        throw Error(ErrorCode::InvalidArgument, path + ": expected \"roots\" or \"pair\"");
    std::string list;
    for (const auto& r : j.at("roots")) {
        if (!list.empty())
            list += ",";
        list += r.is_string() ? r.get<std::string>() : r.dump();
    }
    in = parse_root_list(list, o);
    in.text = list;
    return in;
}

} // namespace detail

inline Input parse_input(const std::string& text, const Rational& order = Rational(default_truncation_order))
{
    const std::string t = detail::trim(text);
    if (t.size() > 5 && t.substr(t.size() - 5) == ".json")
        return detail::parse_input_json(t, order);
    if (t.find('[') != std::string::npos) {
        Input in;
        in.kind = Input::Kind::Pair;
        in.text = text;
        in.pair = parse_pair(text);
        return in;
    }
    return detail::parse_root_list(text, order);
}

namespace detail {

inline NewtonMap as_newton(const Input& in)
{
    if (in.kind != Input::Kind::Divisor)
        throw Error(ErrorCode::InvalidArgument, "this command needs a divisor of constant roots");
    return newton_from_divisor(*in.divisor);
}

inline HomogeneousPair as_pair(const Input& in)
{
    if (in.kind == Input::Kind::Pair)
        return *in.pair;
    return as_newton(in).pair();
}

inline std::vector<PuiseuxSeries> as_family(const Input& in)
{
    if (in.kind == Input::Kind::Family)
        return in.family;
    if (in.kind == Input::Kind::Divisor) {
        std::vector<PuiseuxSeries> roots;
        for (const auto& [p, m] : in.divisor->entries()) {
            if (p.is_infinity() || m != 1)
                throw Error(ErrorCode::InvalidArgument, "a family needs distinct finite roots");
            roots.emplace_back(p.value());
        }
        return roots;
    }
    throw Error(ErrorCode::InvalidArgument, "this command needs a family of roots");
}

inline std::string number(double x)
{
    if (std::abs(x) < 5e-13)
        x = 0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

inline Json vec_json(const Vec3& v) { return Json::array({number(v[0]), number(v[1]), number(v[2])}); }

inline Json hole_json(const HoleStratum& h)
{
    Json j;
    if (h.point)
        j["point"] = h.point->str();
    else
        j["locus"] = h.locus.str();
    j["depth"] = h.depth;
    j["fixed"] = h.fixed;
    return j;
}

inline Json verdict_json(const StabilityVerdict& v)
{
    Json j;
    j["verdict"] = verdict_name(v.verdict);
    j["witness"] = v.witness ? hole_json(*v.witness) : Json(nullptr);
    return j;
}

inline Json descriptor_json(const GitClassDescriptor& g)
{
    Json j;
    j["class"] = g.str();
    j["kind"] = g.kind == GitKind::Stable ? "Stable" : "StrictlySemistable";
    j["degree"] = g.degree;
    if (g.kind == GitKind::Stable) {
        Json pts = Json::array();
        for (const auto& [z, w] : g.configuration.points)
            pts.push_back({{"point", z.str()}, {"weight", w}});
        j["configuration"] = pts;
        j["infinity_multiplicity"] = g.infinity_multiplicity;
    }
    return j;
}

inline Json xi_json(const TypeIIPoint& p) { return p.str(); }

inline Json locus_json(const SemistableLocus& l)
{
    Json j;
    j["kind"] = l.kind == LocusKind::UniqueStableVertex ? "UniqueStableVertex" : "SemistableRegion";
    j["summary"] = l.str();
    if (l.stable_vertex)
        j["stable_vertex"] = xi_json(l.tree.vertices[static_cast<std::size_t>(*l.stable_vertex)]);
    Json rv = Json::array(), re = Json::array();
    for (int v : l.region_vertices)
        rv.push_back(xi_json(l.tree.vertices[static_cast<std::size_t>(v)]));
    for (int i : l.region_edges) {
        const auto& e = l.edges[static_cast<std::size_t>(i)];
        re.push_back(Json::array({xi_json(l.tree.vertices[static_cast<std::size_t>(e.child)]),
                                  xi_json(l.tree.vertices[static_cast<std::size_t>(e.parent)])}));
    }
    j["region"] = {{"vertices", rv}, {"edges", re}, {"closed", l.is_closed()}};
    Json vt = Json::array();
    for (const auto& v : l.vertices) {
        Json row;
        row["xi"] = xi_json(l.tree.vertices[static_cast<std::size_t>(v.vertex)]);
        row["reduction"] = v.reduction.str();
        row["verdict"] = verdict_name(v.verdict.verdict);
        vt.push_back(row);
    }
    Json et = Json::array();
    for (const auto& e : l.edges) {
        Json row;
        row["from"] = xi_json(l.tree.vertices[static_cast<std::size_t>(e.child)]);
        row["to"] = xi_json(l.tree.vertices[static_cast<std::size_t>(e.parent)]);
        row["reduction"] = e.reduction.str();
        row["verdict"] = verdict_name(e.verdict);
        et.push_back(row);
    }
    j["vertices"] = vt;
    j["edges"] = et;
    return j;
}

inline Json tree_json(const MarkedTreeOfSpheres& t)
{
    Json vs = Json::array();
    const auto edges = t.tree.edges();
    for (const auto& s : t.spheres) {
        const auto v = static_cast<std::size_t>(s.vertex);
        Json row;
        row["id"] = s.vertex;
        row["xi"] = xi_json(t.tree.vertices[v]);
        row["parent"] = t.tree.parent[v] < 0 ? Json(nullptr) : Json(t.tree.parent[v]);
        row["edge_length"] = v == 0 ? Json(nullptr) : Json(edges[v - 1].length.get_str());
        Json pts = Json::array();
        for (const auto& p : s.points) {
            if (p.kind == SpecialPoint::Kind::Mark)
                pts.push_back({{"mark", p.label == 0 ? std::string("inf") : "r" + std::to_string(p.label)},
                               {"position", p.position.str()}});
            else
                pts.push_back({{"node", p.label}, {"position", p.position.str()}});
        }
        row["sphere"] = pts;
        vs.push_back(row);
    }
    StableCurve c = stable_curve(t);
    Json j;
    j["vertices"] = vs;
    j["curve"] = {{"marks", c.marks}, {"nodes", c.nodes.size()}, {"components", c.components.size()}};
    return j;
}

inline Json atom_json(const Atom& a)
{
    Json j;
    j["point"] = a.exact ? a.exact->str() : a.point.str();
    j["exact"] = a.exact.has_value();
    j["mass"] = a.mass.get_str();
    return j;
}

} // namespace detail

/// Runs the command line; returns the exit status. Output (or a JSON error
/// object) goes to `out` unless `--out` names a file.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Newton maps, their GIT classes, measures and Berkovich trees"};
    app.require_subcommand(1);
    std::string out_path;
    long order_value = default_truncation_order;
    app.add_option("--out", out_path, "write the report to a file");
    app.add_option("--order", order_value, "truncation order for series literals")->check(CLI::PositiveNumber);

    struct Args {
        std::string input;
        std::string roots;
        std::string second;
        int count = 1;
        int levels = -1;
        long budget = default_iterate_budget;
        std::string dot;
    } args;

    auto add_input = [&](CLI::App* sub) {
        sub->add_option("input", args.input, "divisor, family, pair literal, or a .json file");
        sub->add_option("--roots", args.roots, "comma separated roots");
    };
    auto* classify = app.add_subcommand("classify", "stability verdict");
    add_input(classify);
    auto* git = app.add_subcommand("git-class", "GIT class descriptor");
    add_input(git);
    auto* iterate = app.add_subcommand("iterate", "verdicts of the iterates");
    add_input(iterate);
    iterate->add_option("-n", args.count, "number of iterates")->check(CLI::PositiveNumber);
    iterate->add_option("--budget", args.budget, "largest allowed degree")->check(CLI::PositiveNumber);
    auto* measure = app.add_subcommand("measure", "truncated maximal measure");
    add_input(measure);
    measure->add_option("--levels", args.levels, "preimage levels")->check(CLI::NonNegativeNumber);
    auto* bary = app.add_subcommand("barycenter", "barycentered measure class");
    add_input(bary);
    bary->add_option("--levels", args.levels, "preimage levels")->check(CLI::NonNegativeNumber);
    auto* tree = app.add_subcommand("tree", "marked tree of spheres");
    add_input(tree);
    tree->add_option("--dot", args.dot, "also write DOT to this file");
    auto* hss = app.add_subcommand("hss", "semistable locus in the hull");
    add_input(hss);
    auto* kap = app.add_subcommand("kappa", "GIT class of a family");
    add_input(kap);
    auto* conj = app.add_subcommand("conjugate", "affine conjugacy test");
    conj->add_option("a", args.input, "first input")->required();
    conj->add_option("b", args.second, "second input")->required();

    auto emit = [&](const Json& j) -> int {
        const std::string text = j.dump(2) + "\n";
        if (out_path.empty()) {
            out << text;
            return 0;
        }
        std::ofstream f(out_path);
        if (!f) {
            Json e{{"schema", schema_version}, {"error", {{"code", "io_error"}, {"message", "cannot write " + out_path}}}};
            out << e.dump(2) << "\n";
            return 3;
        }
        f << text;
        return 0;
    };
    auto error = [&](std::string_view code, const std::string& message, std::optional<std::size_t> position) {
        Json e{{"code", code}, {"message", message}};
        if (position)
            e["position"] = *position;
        out << Json{{"schema", schema_version}, {"error", e}}.dump(2) << "\n";
    };

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        error("usage", e.what(), std::nullopt);
        return 2;
    }

    try {
        const Rational order(order_value);
        CLI::App* cmd = app.get_subcommands().front();
        if (cmd != conj) {
            if (!args.roots.empty() && !args.input.empty())
                throw Error(ErrorCode::InvalidArgument, "give either a positional input or --roots");
            if (args.roots.empty() && args.input.empty())
                throw Error(ErrorCode::InvalidArgument, "missing input");
        }
        const std::string text = args.roots.empty() ? args.input : args.roots;
        Json j{{"schema", schema_version}, {"command", cmd->get_name()}, {"input", text}};

        if (cmd == conj) {
            Input a = parse_input(args.input, order), b = parse_input(args.second, order);
            j["input"] = Json::array({args.input, args.second});
            if (a.kind == Input::Kind::Divisor && b.kind == Input::Kind::Divisor) {
                auto m = conjugacy_test(newton_from_divisor(*a.divisor), newton_from_divisor(*b.divisor));
                j["result"] = m ? Json{{"a", m->a.str()}, {"b", m->b.str()}, {"map", m->str()}} : Json("none");
            } else if (a.kind == Input::Kind::Pair && b.kind == Input::Kind::Divisor) {
                auto m = conjugate_to_newton(*a.pair, newton_from_divisor(*b.divisor));
                j["result"] = m ? Json{{"moebius", m->str()}} : Json("none");
            } else
                throw Error(ErrorCode::InvalidArgument, "conjugate compares two divisors or a pair with a divisor");
            return emit(j);
        }

        Input in = parse_input(text, order);
        if (cmd == classify) {
            if (in.kind == Input::Kind::Family) {
                SemistableLocus l = semistable_locus(in.family);
                j["family"] = detail::locus_json(l);
            } else if (in.kind == Input::Kind::Pair) {
                j["degree"] = in.pair->degree();
                j.update(detail::verdict_json(classify_pair(*in.pair)));
                Json holes = Json::array();
                for (const auto& h : hole_strata(*in.pair))
                    holes.push_back(detail::hole_json(h));
                j["holes"] = holes;
            } else {
                NewtonMap n = newton_from_divisor(*in.divisor);
                j["degree"] = n.degree();
                j["divisor"] = n.source().str();
                j.update(detail::verdict_json(classify_newton(n)));
                Json holes = Json::array();
                for (const auto& [p, depth] : holes_and_depths(n))
                    holes.push_back({{"point", p.str()}, {"depth", depth}});
                j["holes"] = holes;
            }
        } else if (cmd == git) {
            if (in.kind == Input::Kind::Family)
                j["class"] = detail::descriptor_json(kappa(in.family));
            else
                j["class"] = detail::descriptor_json(git_class(detail::as_newton(in)));
        } else if (cmd == iterate) {
            IterateReport r = iterate_report(detail::as_pair(in), args.count, args.budget);
            Json its = Json::array();
            for (const auto& e : r.iterates) {
                Json row;
                row["k"] = e.k;
                row["degree"] = e.pair.degree();
                row.update(detail::verdict_json(e.verdict));
                Json holes = Json::array();
                for (const auto& h : e.holes)
                    holes.push_back(detail::hole_json(h));
                row["holes"] = holes;
                if (e.pair.degree() <= 64)
                    row["pair"] = e.factorization.hole_form.str() + " * [" + e.factorization.reduced_a.str() + " : " +
                                  e.factorization.reduced_b.str() + "]";
                its.push_back(row);
            }
            j["iterates"] = its;
            j["verdicts_constant"] = r.verdicts_constant();
        } else if (cmd == measure) {
            HomogeneousPair p = detail::as_pair(in);
            const PairFactorization fac = p.factor();
            const int levels = args.levels >= 0 ? args.levels : default_levels(fac.reduced_degree(), p.degree());
            AtomicMeasure mu = measure_truncated(p, levels);
            Json atoms = Json::array();
            for (const auto& a : mu.atoms)
                atoms.push_back(detail::atom_json(a));
            j["levels"] = mu.levels;
            j["tail"] = mu.tail.get_str();
            j["total_mass"] = mu.total_mass().get_str();
            j["atoms"] = atoms;
        } else if (cmd == bary) {
            NewtonMap n = detail::as_newton(in);
            const int levels = args.levels >= 0 ? args.levels : default_levels(n.reduced_degree(), n.degree());
            MeasureClass c = theta_bar(git_class(n), n, levels);
            if (c.symbolic) {
                j["symbol"] = c.symbol;
            } else {
                j["barycenter"] = detail::vec_json(c.barycenter);
                j["levels"] = c.levels;
                j["tail"] = c.tail.get_str();
                Json atoms = Json::array();
                for (const auto& a : c.atoms)
                    atoms.push_back({{"x", detail::vec_json(a.x)}, {"mass", a.mass.get_str()}});
                j["atoms"] = atoms;
            }
        } else if (cmd == tree) {
            MarkedTreeOfSpheres t = marked_tree(detail::as_family(in));
            j["tree"] = detail::tree_json(t);
            if (!args.dot.empty()) {
                std::ofstream f(args.dot);
                if (!f)
                    throw Error(ErrorCode::IoError, "cannot write " + args.dot);
                f << to_dot(t);
                j["dot"] = args.dot;
            }
        } else if (cmd == hss) {
            j["locus"] = detail::locus_json(semistable_locus(detail::as_family(in)));
        } else if (cmd == kap) {
            j["class"] = detail::descriptor_json(kappa(detail::as_family(in)));
        }
        return emit(j);
    } catch (const ParseError& e) {
        error("parse_error", e.what(), e.position());
        return 2;
    } catch (const Error& e) {
        error(error_code_name(e.code()), e.what(), std::nullopt);
        return e.code() == ErrorCode::IoError ? 3 : 1;
    } catch (const std::exception& e) {
        error("internal", e.what(), std::nullopt);
        return 1;
    }
}

} // namespace cli

} // namespace newton_moduli
