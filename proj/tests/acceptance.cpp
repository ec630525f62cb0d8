#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include <Eigen/Geometry>

#include "fixtures.hpp"
#include "newton_moduli/newton_moduli.hpp"

using namespace newton_moduli;
using fixtures::divisor;
using fixtures::inf;
using fixtures::q;

namespace {

// A check that failed: the message names the offending value.
struct Failure {
    std::string what;
};

void require(bool ok, const std::string& what)
{
    if (!ok)
        throw Failure{what};
}

// Pair from explicit coefficient lists, index i is the coefficient of X^i Y^(d-i).
HomogeneousPair literal_pair(int d, std::vector<std::pair<int, long>> a, std::vector<std::pair<int, long>> b)
{
    std::vector<ExactScalar> ca(static_cast<std::size_t>(d) + 1), cb(static_cast<std::size_t>(d) + 1);
    for (const auto& [i, c] : a)
        ca[static_cast<std::size_t>(i)] = ExactScalar(c);
    for (const auto& [i, c] : b)
        cb[static_cast<std::size_t>(i)] = ExactScalar(c);
    return {HomogeneousForm(d, ca), HomogeneousForm(d, cb)};
}

// [X^2 Y : 2 X Y^2]
HomogeneousPair phi3() { return literal_pair(3, {{2, 1}}, {{1, 2}}); }

std::vector<PuiseuxSeries> family(const std::vector<std::string>& literals)
{
    std::vector<PuiseuxSeries> out;
    for (const auto& s : literals)
        out.push_back(parse_series(s));
    return out;
}

std::vector<PuiseuxSeries> cubic() { return family({"0", "1", "t"}); }
std::vector<PuiseuxSeries> quartic() { return family({"0", "1", "t^(-1)", "2*t^(-1)"}); }
std::vector<PuiseuxSeries> quintic() { return family({"t", "2*t", "1+t", "1+2*t", "t^(-1)"}); }
std::vector<PuiseuxSeries> sextic(const std::string& c) { return family({"0", "1", c, "t^(-1)", "2*t^(-1)", "3*t^(-1)"}); }

TypeIIPoint xi(const std::string& center, long qn) { return {parse_series(center, std::nullopt), Rational(qn)}; }

std::set<std::string> names(const BerkTree& t)
{
    std::set<std::string> out;
    for (const auto& v : t.vertices)
        out.insert(v.str());
    return out;
}

std::string joined(const std::set<std::string>& s)
{
    std::string out;
    for (const auto& x : s)
        out += (out.empty() ? "" : " ") + x;
    return out;
}

// Divisors of degree 2..5: the deterministic family plus seeded random ones.
std::vector<RootDivisor> fixture_divisors()
{
    std::vector<RootDivisor> out = fixtures::divisor_family();
    std::mt19937 rng(2024);
    for (int k = 0; k < 24; ++k)
        out.push_back(fixtures::random_divisor(rng, 2 + k % 4));
    return out;
}

std::vector<std::vector<PuiseuxSeries>> fixture_families()
{
    std::vector<std::vector<PuiseuxSeries>> out{cubic(), quartic(), quintic(), sextic("2"), sextic("5"), sextic("1/3")};
    out.push_back(family({"0", "3", "3+t"}));
    out.push_back(family({"0", "1", "2", "i"}));
    out.push_back(family({"t^2", "t", "1", "t^(-1)", "t^(-2)"}));
    out.push_back(family({"0", "t", "1", "1+t^2", "t^(-1)", "t^(-1)+1"}));
    return out;
}

// ---------------------------------------------------------------------------

std::string boundary_singleton()
{
    for (const auto& div : {divisor({{0, 1}, {1, 1}, {inf(), 1}}), divisor({{0, 2}, {1, 1}}), divisor({{0, 2}, {inf(), 1}})}) {
        NewtonMap n = newton_from_divisor(div);
        require(classify_newton(n).verdict == Verdict::StrictlySemistable, div.str() + " not strictly semistable");
        require(classify_pair(n.pair()).verdict == Verdict::StrictlySemistable, div.str() + " general criterion disagrees");
        require(git_class(n).str() == "StrictlySemistableClass(3)", div.str() + " class " + git_class(n).str());
        HomogeneousPair lim = ops_limit(n.pair(), semistable_limit_weight(n));
        require(lim.projectively_equal(phi3()), div.str() + " limit " + lim.str());
    }
    return "3 boundary divisors limit to [X^2*Y : 2*X*Y^2]";
}

std::string iterate_closed_form()
{
    HomogeneousPair sq = compose(phi3(), phi3());
    // X^4 Y^4 [X : 4Y] = [X^5 Y^4 : 4 X^4 Y^5]
    HomogeneousPair expected = literal_pair(9, {{5, 1}}, {{4, 4}});
    require(sq.projectively_equal(expected), "phi_3^2 = " + sq.str());
    require(classify_pair(sq).verdict == Verdict::StrictlySemistable, "phi_3^2 not strictly semistable");
    return "phi_3^2 = " + sq.normalized().str();
}

std::string iterate_verdicts()
{
    auto divs = fixture_divisors();
    require(divs.size() >= 30, "too few fixtures");
    int counts[3] = {0, 0, 0};
    for (const auto& div : divs) {
        NewtonMap n = newton_from_divisor(div);
        Verdict v1 = classify_newton(n).verdict;
        Verdict v2 = classify_pair(compose(n.pair(), n.pair())).verdict;
        require(v1 == v2, div.str() + ": " + std::string(verdict_name(v1)) + " vs " + std::string(verdict_name(v2)));
        ++counts[static_cast<int>(v1)];
    }
    std::ostringstream s;
    s << divs.size() << " divisors (stable " << counts[0] << ", strictly semistable " << counts[1] << ", unstable "
      << counts[2] << ") keep their verdict under N -> N o N";
    return s.str();
}

std::string semistable_determinate()
{
    int checked = 0;
    for (const auto& div : fixture_divisors()) {
        NewtonMap n = newton_from_divisor(div);
        if (!is_semistable(classify_newton(n).verdict))
            continue;
        require(!is_indeterminate(n.pair()), div.str() + " is indeterminate");
        ++checked;
    }
    require(checked >= 10, "too few semistable fixtures");
    return std::to_string(checked) + " semistable fixtures are determinate";
}

std::string vertex_sets()
{
    struct Case {
        const char* name;
        std::vector<PuiseuxSeries> roots;
        std::set<std::string> expected;
    };
    for (const auto& c : {Case{"cubic", cubic(), {"xi(0,0)", "xi(0,1)"}}, Case{"quartic", quartic(), {"xi(0,0)", "xi(0,-1)"}},
                          Case{"quintic", quintic(), {"xi(0,0)", "xi(0,1)", "xi(1,1)", "xi(0,-1)"}}}) {
        auto got = names(hull_vertices(c.roots));
        require(got == c.expected, std::string(c.name) + ": " + joined(got));
    }
    return "cubic, quartic and quintic vertex sets";
}

std::string semistable_loci()
{
    SemistableLocus c = semistable_locus(cubic());
    require(c.kind == LocusKind::SemistableRegion && c.is_closed() && c.region_vertices.size() == 2 &&
                c.region_edges.size() == 1,
            "cubic " + c.str());
    for (const auto& v : c.vertices)
        require(v.verdict.verdict != Verdict::Stable, "cubic has a stable vertex");

    SemistableLocus q4 = semistable_locus(quartic());
    require(q4.kind == LocusKind::UniqueStableVertex &&
                q4.tree.vertices[static_cast<std::size_t>(*q4.stable_vertex)] == xi("0", -1),
            "quartic " + q4.str());

    SemistableLocus q5 = semistable_locus(quintic());
    const int g = q5.tree.find(TypeIIPoint::gauss());
    require(g >= 0, "quintic tree lacks the Gauss point");
    const auto& at_g = q5.vertices[static_cast<std::size_t>(g)];
    Verdict direct = classify_newton(newton_from_divisor(divisor({{0, 2}, {1, 2}, {inf(), 1}}))).verdict;
    require(at_g.verdict.verdict == direct, "quintic Gauss point " + std::string(verdict_name(at_g.verdict.verdict)));

    int families = 0;
    for (const auto& roots : fixture_families()) {
        SemistableLocus l = semistable_locus(roots);  // asserts exclusivity and connectedness
        require(!(l.region_vertices.empty() && l.region_edges.empty()), "empty locus");
        ++families;
    }
    return c.str() + "; " + q4.str() + "; quintic Gauss point " + std::string(verdict_name(direct)) + "; " +
           std::to_string(families) + " families nonempty and connected";
}

std::string kappa_and_fiber()
{
    GitClassDescriptor expected = git_class(newton_from_divisor(divisor({{0, 3}, {1, 1}, {2, 1}, {3, 1}})));
    for (const char* c : {"2", "5", "1/3"}) {
        GitClassDescriptor k = kappa(sextic(c));
        require(k == expected, std::string("c = ") + c + ": " + k.str());
    }
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> num(-9, 9);
    for (int trial = 0; trial < 10; ++trial) {
        std::set<P1Point> pts;
        while (pts.size() < 4)
            pts.insert(P1Point(q(num(rng), 1 + trial % 3)));
        MarkedNewtonMap m(std::vector<P1Point>(pts.begin(), pts.end()));
        auto fiber = marked_fiber(m);
        require(fiber.size() == 2, "fiber size " + std::to_string(fiber.size()));
        GitClassDescriptor base = git_class(m.map());
        for (const auto& point : fiber) {
            std::vector<P1Point> roots(point.begin() + 1, point.end());
            require(git_class(newton_from_divisor(RootDivisor::from_points(roots))) == base, "fiber leaves the class");
        }
    }
    return expected.str() + " for c in {2, 5, 1/3}; marked fibers of size 2";
}

std::string measure_masses()
{
    NewtonMap n = newton_from_divisor(divisor({{0, 3}, {1, 1}, {2, 1}}));
    require(classify_newton(n).verdict == Verdict::StrictlySemistable, "fixture not strictly semistable");
    Rational partial = 0, fifth = make_rational(1, 5), power = fifth;
    for (int k = 0; k <= 6; ++k) {
        partial += 2 * power;  // 2 * 5^-(k+1)
        power *= fifth;
        AtomicMeasure mu = measure_truncated(n, k);
        require(mass_at(mu, P1Point(q(0))).lower == partial, "mass at 0 at level " + std::to_string(k));
    }
    // closed form of the geometric series: 2 * (1/5) / (1 - 1/5)
    require(2 * fifth / (1 - fifth) == make_rational(1, 2), "limit mass");

    int fixtures_checked = 0;
    for (const auto& div : fixture_divisors()) {
        NewtonMap m = newton_from_divisor(div);
        const int d = m.degree(), r = m.reduced_degree();
        if (r == d || r < 1)
            continue;
        for (int k = 0; k <= 3; ++k) {
            Rational ratio = make_rational(r, d), p = 1;
            for (int j = 0; j <= k; ++j)
                p *= ratio;
            require(measure_truncated(m, k).total_mass() == 1 - p, div.str() + " total mass at level " + std::to_string(k));
        }
        ++fixtures_checked;
    }
    return "mass at 0 = 2*sum 5^-(n+1) -> 1/2; total mass identity on " + std::to_string(fixtures_checked) + " fixtures";
}

Vec3 rotate(const Eigen::Matrix3d& r, const Vec3& x)
{
    Eigen::Vector3d v = r * Eigen::Vector3d(x[0], x[1], x[2]);
    return {v[0], v[1], v[2]};
}

double dist(const Vec3& a, const Vec3& b) { return std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]); }

std::string barycenters()
{
    const double s = 1 / std::sqrt(3.0);
    AtomicMeasure tetra;
    for (const Vec3& v : {Vec3{s, s, s}, Vec3{s, -s, -s}, Vec3{-s, s, -s}, Vec3{-s, -s, s}})
        tetra.atoms.push_back({SpherePoint::from_sphere(v), make_rational(1, 4), std::nullopt});
    const double tnorm = norm(conformal_barycenter(tetra).center);
    require(tnorm < 1e-10, "tetrahedron barycenter norm " + std::to_string(tnorm));

    AtomicMeasure mu = measure_truncated(newton_from_divisor(divisor({{0, 2}, {1, 1}, {2, 1}})), 5);
    BarycenterResult b = conformal_barycenter(mu);
    std::mt19937 rng(43);
    std::normal_distribution<double> g;
    double worst = 0;
    for (int t = 0; t < 20; ++t) {
        Eigen::Matrix3d r = Eigen::Quaterniond(g(rng), g(rng), g(rng), g(rng)).normalized().toRotationMatrix();
        AtomicMeasure rotated;
        for (const auto& a : mu.atoms)
            rotated.atoms.push_back({SpherePoint::from_sphere(rotate(r, a.point.to_sphere())), a.mass, std::nullopt});
        worst = std::max(worst, dist(conformal_barycenter(rotated).center, rotate(r, b.center)));
    }
    require(worst < 1e-8, "rotation defect " + std::to_string(worst));

    AtomicMeasure half;
    half.atoms.push_back({SpherePoint::from_sphere({0, 0, 1}), make_rational(1, 2), std::nullopt});
    half.atoms.push_back({SpherePoint::from_sphere({0, 0, -1}), make_rational(1, 2), std::nullopt});
    bool undefined = false;
    try {
        conformal_barycenter(half);
    } catch (const Error& e) {
        undefined = e.code() == ErrorCode::BarycenterUndefined;
    }
    require(undefined, "half-mass measure did not raise BarycenterUndefined");
    std::ostringstream out;
    out << "tetrahedron |C| = " << tnorm << ", rotation defect " << worst << ", half mass undefined";
    return out.str();
}

std::string conjugacy()
{
    NewtonMap a = newton_from_divisor(divisor({{0, 3}, {1, 2}, {2, 1}}));
    NewtonMap b = newton_from_divisor(divisor({{0, 3}, {1, 2}, {3, 1}}));
    require(!conjugacy_test(a, b), "{0:3,1:2,2:1} and {0:3,1:2,3:1} reported conjugate");

    // XY[X : 2X + 2Y] = [X^2 Y : 2 X^2 Y + 2 X Y^2]
    HomogeneousPair f = literal_pair(3, {{2, 1}}, {{2, 2}, {1, 2}});
    NewtonMap boundary = newton_from_divisor(divisor({{0, 2}, {inf(), 1}}));
    require(conjugate_to_newton(phi3(), boundary).has_value(), "phi_3 not conjugate to its own Newton map");
    require(!conjugate_to_newton(f, boundary), "XY[X:2X+2Y] reported conjugate to XY[X:2Y]");
    require(classify_pair(f).verdict == Verdict::StrictlySemistable, "XY[X:2X+2Y] not strictly semistable");
    HomogeneousPair lim = ops_limit(f, {1, 0, std::nullopt});
    require(lim.projectively_equal(phi3()), "limit " + lim.str());
    return "no conjugacy; XY[X:2X+2Y] degenerates to XY[X:2Y] without being conjugate";
}

std::string stable_curves()
{
    StableCurve c = stable_curve(cubic());
    require(c.components.size() == 2 && c.marks == 4 && c.nodes.size() == 1, "cubic curve " + c.str());

    StableCurve limit = stable_curve(family({"0", "3", "3+t"}));
    require(forgetful_coordinate(limit, 0, 1, 2, 3) == P1Point(q(1)), "limit coordinate");
    require(tree_equivalent(stable_curve(family({"0", "3*t^2", "(3+t)*t^2"})), limit), "diagonal family not equivalent");
    for (long n = 1; n <= 8; ++n) {
        StableCurve tn = stable_curve(family({"0", "3*t^2", "(3+1/" + std::to_string(n) + ")*t^2"}));
        require(forgetful_coordinate(tn, 0, 1, 2, 3) == P1Point(q(1) + q(1, 3 * n)), "T_" + std::to_string(n) + " coordinate");
        require(!tree_equivalent(tn, limit), "T_" + std::to_string(n) + " equivalent to the limit");
    }
    return c.str() + "; T_n coordinates 1 + 1/(3n) converge to the limit's 1";
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<std::string()>>> criteria{
        {"boundary_singleton", boundary_singleton},
        {"iterate_closed_form", iterate_closed_form},
        {"iterate_verdicts", iterate_verdicts},
        {"semistable_determinate", semistable_determinate},
        {"vertex_sets", vertex_sets},
        {"semistable_loci (quintic Gauss point follows the hole-depth rule)", semistable_loci},
        {"kappa_and_marked_fiber", kappa_and_fiber},
        {"measure_masses", measure_masses},
        {"barycenters", barycenters},
        {"conjugacy", conjugacy},
        {"stable_curves", stable_curves},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& [name, check] = criteria[i];
        std::string status = "PASS", detail;
        try {
            detail = check();
        } catch (const Failure& f) {
            status = "FAIL";
            detail = f.what;
        } catch (const std::exception& e) {
            status = "FAIL";
            detail = std::string("exception: ") + e.what();
        }
        failed += status == "FAIL";
        std::cout << status << " " << i + 1 << " " << name << ": " << detail << "\n";
    }
    return failed == 0 ? 0 : 1;
}
