#pragma once

#include <random>
#include <vector>

#include "newton_moduli/newton_map.hpp"

namespace fixtures {

using namespace newton_moduli;

inline P1Point inf() { return P1Point::infinity(); }
inline ExactScalar q(long n, long d = 1) { return ExactScalar(make_rational(n, d)); }

inline RootDivisor divisor(std::vector<std::pair<P1Point, int>> e) { return RootDivisor(e); }

/// Random divisor of degree d with small rational support; ~1 in 4 include infinity.
inline RootDivisor random_divisor(std::mt19937& rng, int d, bool allow_infinity = true)
{
    std::uniform_int_distribution<int> num(-6, 6), den(1, 3), coin(0, 3);
    for (;;) {
        std::vector<std::pair<P1Point, int>> e;
        int left = d;
        if (allow_infinity && coin(rng) == 0) {
            int m = 1 + static_cast<int>(rng() % static_cast<unsigned>((d + 1) / 2));
            e.emplace_back(inf(), m);
            left -= m;
        }
        while (left > 0) {
            int m = 1 + static_cast<int>(rng() % static_cast<unsigned>(left));
            if (coin(rng) != 0)
                m = 1;
            e.emplace_back(P1Point(q(num(rng), den(rng))), m);
            left -= m;
        }
        RootDivisor div(e);
        if (div.finite_entries().empty())
            continue;
        // a single simple finite root gives a constant reduced map; skip it
        auto fin = div.finite_entries();
        if (fin.size() == 1 && fin[0].second == 1)
            continue;
        return div;
    }
}

/// Small deterministic family over degrees 2..5 covering stable, strictly
/// semistable and unstable maps.
inline std::vector<RootDivisor> divisor_family()
{
    return {
        divisor({{0, 1}, {1, 1}}),
        divisor({{0, 2}}),
        divisor({{0, 1}, {inf(), 1}}),
        divisor({{0, 1}, {1, 1}, {2, 1}}),
        divisor({{0, 2}, {inf(), 1}}),
        divisor({{0, 1}, {1, 1}, {inf(), 1}}),
        divisor({{0, 2}, {1, 1}}),
        divisor({{0, 3}}),
        divisor({{0, 1}, {1, 1}, {2, 1}, {3, 1}}),
        divisor({{0, 2}, {1, 1}, {2, 1}}),
        divisor({{0, 1}, {1, 1}, {inf(), 2}}),
        divisor({{0, 2}, {1, 2}}),
        divisor({{0, 3}, {1, 1}}),
        divisor({{0, 1}, {1, 1}, {2, 1}, {inf(), 1}}),
        divisor({{0, 1}, {1, 1}, {2, 1}, {3, 1}, {4, 1}}),
        divisor({{0, 2}, {1, 1}, {2, 1}, {3, 1}}),
        divisor({{0, 2}, {1, 2}, {inf(), 1}}),
        divisor({{0, 3}, {1, 1}, {2, 1}}),
        divisor({{0, 3}, {1, 1}, {inf(), 1}}),
        divisor({{0, 1}, {1, 1}, {inf(), 3}}),
        divisor({{0, 2}, {1, 1}, {inf(), 2}}),
    };
}

} // namespace fixtures
