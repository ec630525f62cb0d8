#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "moduli_git.hpp"

namespace newton_moduli {

using Vec3 = std::array<double, 3>;

/// A point of the Riemann sphere in floating point: finite complex or infinity.
struct SpherePoint {
    bool infinite = false;
    numeric::Complex z{};

    static SpherePoint at_infinity() { return {true, {}}; }
    static SpherePoint from(const P1Point& p)
    {
        return p.is_infinity() ? at_infinity() : SpherePoint{false, p.value().to_complex()};
    }

    /// Inverse stereographic projection onto the unit sphere; infinity is (0,0,1).
    Vec3 to_sphere() const
    {
        if (infinite)
            return {0.0, 0.0, 1.0};
        const double r2 = std::norm(z);
        return {2 * z.real() / (r2 + 1), 2 * z.imag() / (r2 + 1), (r2 - 1) / (r2 + 1)};
    }

    static SpherePoint from_sphere(const Vec3& x)
    {
        if (x[2] >= 1.0 - 1e-15)
            return at_infinity();
        return {false, {x[0] / (1 - x[2]), x[1] / (1 - x[2])}};
    }

    std::string str() const
    {
        if (infinite)
            return "inf";
        char buf[96];
        std::snprintf(buf, sizeof buf, "%.12g%+.12gi", z.real(), z.imag());
        return buf;
    }
};

inline bool same_point(const SpherePoint& a, const SpherePoint& b, double rel_tol = 1e-9)
{
    if (a.infinite || b.infinite)
        return a.infinite && b.infinite;
    return numeric::close(a.z, b.z, rel_tol);
}

struct Atom {
    SpherePoint point;
    Rational mass;
    std::optional<P1Point> exact;  ///< set when the point is known exactly
};

/// Finite atomic measure; the mass missing from the atoms is at most `tail`.
struct AtomicMeasure {
    std::vector<Atom> atoms;
    Rational tail{0};
    int levels = 0;

    Rational total_mass() const
    {
        Rational s = 0;
        for (const auto& a : atoms)
            s += a.mass;
        return s;
    }
};

inline constexpr std::size_t default_atom_budget = 200000;

namespace detail {

struct PreimageNode {
    std::optional<P1Point> exact;
    SpherePoint point;
    Rational mass;
};

// Preimages of w under the reduced map (a, b) with multiplicity, exactly when
// w is exact; each preimage carries parent mass * multiplicity / d.
inline void push_preimages(const PairFactorization& fac, const PreimageNode& w, const Rational& step,
                           std::vector<PreimageNode>& out)
{
    const int r = fac.reduced_degree();
    if (w.exact) {
        auto [wx, wy] = w.exact->homogeneous();
        HomogeneousForm g = wy * fac.reduced_a - wx * fac.reduced_b;
        auto roots = roots_of_form(g);
        for (const auto& [p, m] : roots.roots)
            out.push_back({p, SpherePoint::from(p), w.mass * step * m});
        for (const auto& [form, m] : roots.irreducible) {
            std::vector<numeric::Complex> coeffs;
            const Polynomial poly = form.dehomogenize();
            for (const auto& c : poly.coeffs())
                coeffs.push_back(c.to_complex());
            for (const auto& z : numeric::polynomial_roots(coeffs))
                out.push_back({std::nullopt, SpherePoint{false, z}, w.mass * step * m});
        }
        return;
    }
    // g = wy * a - wx * b with (wx, wy) = (z, 1) or (1, 0)
    std::vector<numeric::Complex> coeffs(static_cast<std::size_t>(r) + 1);
    double scale = 0;
    for (int i = 0; i <= r; ++i) {
        numeric::Complex a = fac.reduced_a.coeff(i).to_complex();
        numeric::Complex b = fac.reduced_b.coeff(i).to_complex();
        coeffs[static_cast<std::size_t>(i)] = w.point.infinite ? -b : a - w.point.z * b;
        scale = std::max(scale, std::abs(coeffs[static_cast<std::size_t>(i)]));
    }
    int top = r;
    while (top >= 0 && std::abs(coeffs[static_cast<std::size_t>(top)]) <= 1e-14 * scale)
        --top;
    if (top < 0)
        throw Error(ErrorCode::RootFinderFailure, "preimage equation vanishes numerically");
    coeffs.resize(static_cast<std::size_t>(top) + 1);
    if (top < r)
        out.push_back({std::nullopt, SpherePoint::at_infinity(), w.mass * step * (r - top)});
    for (const auto& c : numeric::cluster_roots(numeric::polynomial_roots(coeffs), 1e-6))
        out.push_back({std::nullopt, SpherePoint{false, c.center}, w.mass * step * c.multiplicity});
}

// Merge numerically coincident atoms (relative 1e-9), exact ones by equality.
inline std::vector<Atom> merge_atoms(std::vector<PreimageNode> nodes)
{
    std::map<P1Point, Rational> exact;
    std::vector<PreimageNode> approx;
    Rational at_infinity = 0;
    bool has_infinity = false;
    for (auto& n : nodes) {
        if (n.exact)
            exact[*n.exact] += n.mass;
        else if (n.point.infinite) {
            at_infinity += n.mass;
            has_infinity = true;
        } else
            approx.push_back(std::move(n));
    }
    std::vector<Atom> out;
    for (const auto& [p, m] : exact)
        out.push_back({SpherePoint::from(p), m, p});
    if (has_infinity) {
        // a numerically found infinity coincides with an exact one if present
        auto it = std::find_if(out.begin(), out.end(), [](const Atom& a) { return a.point.infinite; });
        if (it != out.end())
            it->mass += at_infinity;
        else
            out.push_back({SpherePoint::at_infinity(), at_infinity, std::nullopt});
    }
    std::sort(approx.begin(), approx.end(),
              [](const PreimageNode& a, const PreimageNode& b) { return a.point.z.real() < b.point.z.real(); });
    std::vector<bool> used(approx.size(), false);
    for (std::size_t i = 0; i < approx.size(); ++i) {
        if (used[i])
            continue;
        Atom a{approx[i].point, approx[i].mass, std::nullopt};
        const double reach = 1e-9 * std::max(1.0, std::abs(approx[i].point.z)) * 2;
        for (std::size_t j = i + 1; j < approx.size() && approx[j].point.z.real() - approx[i].point.z.real() <= reach; ++j)
            if (!used[j] && same_point(approx[i].point, approx[j].point)) {
                used[j] = true;
                a.mass += approx[j].mass;
            }
        out.push_back(std::move(a));
    }
    return out;
}

inline Rational rational_power(const Rational& base, int exp)
{
    Rational r = 1;
    for (int i = 0; i < exp; ++i)
        r *= base;
    return r;
}

} // namespace detail

/// Levels needed for tail < 1e-6 (at most 12).
inline int default_levels(int reduced_degree, int degree)
{
    if (reduced_degree == 0)
        return 0;
    const double ratio = static_cast<double>(reduced_degree) / degree;
    int n = 0;
    while (n < 12 && std::pow(ratio, n + 1) >= 1e-6)
        ++n;
    return n;
}

/// Atoms of sum_n d^{-(n+1)} sum_{H(h)=0} sum_{fhat^n(z)=h} delta_z over
/// levels 0..n_max (fewer if the atom budget is reached; `levels` reports the
/// last complete level). Masses are exact.
inline AtomicMeasure measure_truncated(const HomogeneousPair& f, int n_max, std::size_t atom_budget = default_atom_budget)
{
    if (n_max < 0)
        throw Error(ErrorCode::InvalidArgument, "level count must be non-negative");
    if (is_indeterminate(f))
        throw Error(ErrorCode::Indeterminate, "indeterminate pair has no maximal measure");
    const PairFactorization fac = f.factor();
    if (fac.hole_form.degree() == 0)
        throw Error(ErrorCode::NondegenerateMap, "nondegenerate map: the measure is not atomic");
    const int d = f.degree();
    const int r = fac.reduced_degree();
    const Rational step = make_rational(1, d);

    std::vector<detail::PreimageNode> level;
    auto holes = roots_of_form(fac.hole_form);
    for (const auto& [p, depth] : holes.roots)
        level.push_back({p, SpherePoint::from(p), step * depth});
    for (const auto& [form, depth] : holes.irreducible) {
        std::vector<numeric::Complex> coeffs;
        const Polynomial poly = form.dehomogenize();
        for (const auto& c : poly.coeffs())
            coeffs.push_back(c.to_complex());
        for (const auto& z : numeric::polynomial_roots(coeffs))
            level.push_back({std::nullopt, SpherePoint{false, z}, step * depth});
    }

    std::vector<detail::PreimageNode> all = level;
    int done = 0;
    if (r > 0) {
        for (int n = 1; n <= n_max; ++n) {
            if (all.size() + level.size() * static_cast<std::size_t>(r) > atom_budget)
                break;
            std::vector<detail::PreimageNode> next;
            next.reserve(level.size() * static_cast<std::size_t>(r));
            for (const auto& w : level)
                detail::push_preimages(fac, w, step, next);
            level = std::move(next);
            all.insert(all.end(), level.begin(), level.end());
            done = n;
        }
    } else {
        done = n_max;
    }

    AtomicMeasure mu;
    mu.atoms = detail::merge_atoms(std::move(all));
    mu.levels = done;
    mu.tail = detail::rational_power(make_rational(r, d), done + 1);
    return mu;
}

inline AtomicMeasure measure_truncated(const NewtonMap& n, int n_max, std::size_t atom_budget = default_atom_budget)
{
    return measure_truncated(n.pair(), n_max, atom_budget);
}

struct MassBounds {
    Rational lower;
    Rational upper;
};

/// Truncated mass at z and the certified upper bound lower + tail.
inline MassBounds mass_at(const AtomicMeasure& mu, const SpherePoint& z)
{
    Rational lower = 0;
    for (const auto& a : mu.atoms)
        if (same_point(a.point, z))
            lower += a.mass;
    return {lower, lower + mu.tail};
}

inline MassBounds mass_at(const AtomicMeasure& mu, const P1Point& z)
{
    Rational lower = 0;
    for (const auto& a : mu.atoms)
        if (a.exact ? *a.exact == z : same_point(a.point, SpherePoint::from(z)))
            lower += a.mass;
    return {lower, lower + mu.tail};
}

// ---------------------------------------------------------------------------
// Hyperbolic ball

using BallPoint = Vec3;

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// Isometry of the unit ball sending a to 0 and fixing the diameter through a;
/// its inverse is ball_isometry(-a, .).
inline Vec3 ball_isometry(const Vec3& a, const Vec3& x)
{
    const double aa = dot(a, a);
    const double xx = dot(x, x);
    const double xa = dot(x, a);
    Vec3 diff{x[0] - a[0], x[1] - a[1], x[2] - a[2]};
    const double dd = dot(diff, diff);
    const double den = 1 - 2 * xa + xx * aa;
    Vec3 out{};
    for (int i = 0; i < 3; ++i)
        out[static_cast<std::size_t>(i)] = ((1 - aa) * diff[static_cast<std::size_t>(i)] - dd * a[static_cast<std::size_t>(i)]) / den;
    return out;
}

inline Vec3 negate(const Vec3& a) { return {-a[0], -a[1], -a[2]}; }

struct WeightedSpherePoints {
    std::vector<Vec3> points;
    std::vector<double> weights;  ///< normalized to total 1
};

inline WeightedSpherePoints sphere_points(const AtomicMeasure& mu)
{
    WeightedSpherePoints w;
    const Rational total = mu.total_mass();
    if (sgn(total) <= 0)
        throw Error(ErrorCode::InvalidArgument, "measure has no mass");
    for (const auto& a : mu.atoms) {
        w.points.push_back(a.point.to_sphere());
        w.weights.push_back(Rational(a.mass / total).get_d());
    }
    return w;
}

/// Euclidean center of mass of the pushforward by the isometry moving c to 0.
inline Vec3 center_of_mass(const WeightedSpherePoints& w, const Vec3& c)
{
    Vec3 e{};
    for (std::size_t i = 0; i < w.points.size(); ++i) {
        Vec3 y = ball_isometry(c, w.points[i]);
        for (int k = 0; k < 3; ++k)
            e[static_cast<std::size_t>(k)] += w.weights[i] * y[static_cast<std::size_t>(k)];
    }
    return e;
}

struct BarycenterResult {
    BallPoint center;
    double residual = 0;
    int steps = 0;
};

/// Conformal barycenter: the w in the ball with E((T_w)_* mu) = 0 for mu
/// normalized to total mass 1. Every atom must carry less than half of it.
inline BarycenterResult conformal_barycenter(const AtomicMeasure& mu, double tolerance = 1e-12, int max_steps = 10000)
{
    const Rational half_total = mu.total_mass() / 2;
    for (const auto& a : mu.atoms)
        if (a.mass >= half_total)
            throw Error(ErrorCode::BarycenterUndefined, "atom at " + a.point.str() + " carries at least half the mass");
    WeightedSpherePoints w = sphere_points(mu);

    Vec3 c{0, 0, 0};
    for (int step = 0; step <= max_steps; ++step) {
        Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
        Eigen::Vector3d e = Eigen::Vector3d::Zero();
        for (std::size_t i = 0; i < w.points.size(); ++i) {
            Vec3 y = ball_isometry(c, w.points[i]);
            Eigen::Vector3d v(y[0], y[1], y[2]);
            e += w.weights[i] * v;
            m += w.weights[i] * v * v.transpose();
        }
        if (e.norm() < tolerance)
            return {c, e.norm(), step};
        // E(phi_s pushforward) ~ E - 2 (I - M) s for small s
        Eigen::Vector3d s = (2 * (Eigen::Matrix3d::Identity() - m)).fullPivLu().solve(e);
        if (!s.allFinite())
            throw Error(ErrorCode::NumericalFailure, "barycenter step is not finite");
        if (s.norm() > 0.5)
            s *= 0.5 / s.norm();
        c = ball_isometry(negate(c), {s[0], s[1], s[2]});
        if (norm(c) >= 1)
            throw Error(ErrorCode::NumericalFailure, "barycenter iterate left the ball");
    }
    throw Error(ErrorCode::NumericalFailure, "barycenter iteration did not converge");
}

// ---------------------------------------------------------------------------
// Barycentered measures modulo rotation

struct SphereAtom {
    Vec3 x;
    Rational mass;
};

/// A barycentered measure in canonical rotational position, or the symbolic
/// class delta_0/2 + delta_inf/2 of the strictly semistable boundary.
struct MeasureClass {
    bool symbolic = false;
    std::string symbol;
    std::vector<SphereAtom> atoms;
    Rational tail{0};
    int levels = 0;
    BallPoint barycenter{};

    std::string str() const
    {
        if (symbolic)
            return symbol;
        return "barycentered measure with " + std::to_string(atoms.size()) + " atoms";
    }
};

inline const char* semistable_measure_symbol() { return "δ₀/2+δ_∞/2"; }

namespace detail {

inline Eigen::Matrix3d rotation_to_north(const Vec3& p)
{
    Eigen::Vector3d a(p[0], p[1], p[2]);
    a.normalize();
    Eigen::Vector3d north(0, 0, 1);
    return Eigen::Quaterniond::FromTwoVectors(a, north).toRotationMatrix();
}

inline std::vector<SphereAtom> rotated(const std::vector<SphereAtom>& atoms, const Eigen::Matrix3d& r)
{
    std::vector<SphereAtom> out;
    out.reserve(atoms.size());
    for (const auto& a : atoms) {
        Eigen::Vector3d v = r * Eigen::Vector3d(a.x[0], a.x[1], a.x[2]);
        out.push_back({{v[0], v[1], v[2]}, a.mass});
    }
    return out;
}

inline double rounded(double x) { return std::round(x * 1e8) / 1e8; }

// Heavier first, then rounded coordinates.
inline bool atom_before(const SphereAtom& a, const SphereAtom& b)
{
    if (a.mass != b.mass)
        return a.mass > b.mass;
    for (int k = 0; k < 3; ++k) {
        double x = rounded(a.x[static_cast<std::size_t>(k)]);
        double y = rounded(b.x[static_cast<std::size_t>(k)]);
        if (x != y)
            return x < y;
    }
    return false;
}

inline bool list_before(const std::vector<SphereAtom>& a, const std::vector<SphereAtom>& b)
{
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
        if (atom_before(a[i], b[i]))
            return true;
        if (atom_before(b[i], a[i]))
            return false;
    }
    return a.size() < b.size();
}

} // namespace detail

/// Rotation representative: a heaviest atom at the north pole and a heaviest
/// atom off the polar axis on the meridian of zero longitude; ties among
/// candidates go to the configuration whose sorted atom list is smallest.
inline std::vector<SphereAtom> canonical_rotation(const std::vector<SphereAtom>& atoms)
{
    if (atoms.empty())
        return atoms;
    Rational top = atoms.front().mass;
    for (const auto& a : atoms)
        if (a.mass > top)
            top = a.mass;
    std::optional<std::vector<SphereAtom>> best;
    for (const auto& north : atoms) {
        if (north.mass != top)
            continue;
        auto r1 = detail::rotation_to_north(north.x);
        auto polar = detail::rotated(atoms, r1);
        std::optional<Rational> second;
        for (const auto& a : polar)
            if (std::hypot(a.x[0], a.x[1]) > 1e-9 && (!second || a.mass > *second))
                second = a.mass;
        std::vector<Eigen::Matrix3d> spins;
        if (!second)
            spins.push_back(Eigen::Matrix3d::Identity());
        else
            for (const auto& a : polar)
                if (std::hypot(a.x[0], a.x[1]) > 1e-9 && a.mass == *second)
                    spins.push_back(Eigen::AngleAxisd(-std::atan2(a.x[1], a.x[0]), Eigen::Vector3d::UnitZ()).toRotationMatrix());
        for (const auto& spin : spins) {
            auto cand = detail::rotated(polar, spin);
            std::sort(cand.begin(), cand.end(), detail::atom_before);
            if (!best || detail::list_before(cand, *best))
                best = std::move(cand);
        }
    }
    return *best;
}

/// Barycentered measure of N up to rotation, or the symbolic class for a
/// strictly semistable class.
inline MeasureClass theta_bar(const GitClassDescriptor& g, const NewtonMap& n, int n_max,
                              std::size_t atom_budget = default_atom_budget)
{
    if (g.kind == GitKind::StrictlySemistable) {
        MeasureClass c;
        c.symbolic = true;
        c.symbol = semistable_measure_symbol();
        return c;
    }
    AtomicMeasure mu = measure_truncated(n, n_max, atom_budget);
    BarycenterResult b = conformal_barycenter(mu);
    std::vector<SphereAtom> atoms;
    for (const auto& a : mu.atoms)
        atoms.push_back({ball_isometry(b.center, a.point.to_sphere()), a.mass});
    MeasureClass c;
    c.atoms = canonical_rotation(atoms);
    c.tail = mu.tail;
    c.levels = mu.levels;
    c.barycenter = b.center;
    return c;
}

} // namespace newton_moduli
