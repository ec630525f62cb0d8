#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "error.hpp"

namespace newton_moduli::numeric {

using Complex = std::complex<double>;

/// Horner evaluation of sum coeffs[k] z^k and its derivative, in long double.
inline std::pair<std::complex<long double>, std::complex<long double>>
horner(std::span<const Complex> coeffs, std::complex<long double> z)
{
    std::complex<long double> p = 0, dp = 0;
    for (std::size_t k = coeffs.size(); k-- > 0;) {
        dp = dp * z + p;
        p = p * z + std::complex<long double>(coeffs[k].real(), coeffs[k].imag());
    }
    return {p, dp};
}

/// All complex roots of sum coeffs[k] z^k (ascending), via companion-matrix
/// eigenvalues followed by a few guarded Newton polishing steps.
/// The leading coefficient must be nonzero.
inline std::vector<Complex> polynomial_roots(std::span<const Complex> coeffs)
{
    if (coeffs.empty() || coeffs.back() == Complex(0.0))
        throw Error(ErrorCode::RootFinderFailure, "leading coefficient is zero");
    const std::size_t n = coeffs.size() - 1;
    std::vector<Complex> roots;
    if (n == 0)
        return roots;
    if (n == 1) {
        roots.push_back(-coeffs[0] / coeffs[1]);
        return roots;
    }

    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n),
                                                        static_cast<Eigen::Index>(n));
    for (std::size_t i = 1; i < n; ++i)
        companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
    for (std::size_t i = 0; i < n; ++i)
        companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n - 1)) =
            -coeffs[i] / coeffs[n];

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    if (solver.info() != Eigen::Success)
        throw Error(ErrorCode::RootFinderFailure, "companion eigenvalue solver did not converge");

    roots.reserve(n);
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        std::complex<long double> z(solver.eigenvalues()[i].real(), solver.eigenvalues()[i].imag());
        auto [p, dp] = horner(coeffs, z);
        for (int step = 0; step < 4 && std::abs(dp) != 0.0L; ++step) {
            auto candidate = z - p / dp;
            auto [pc, dpc] = horner(coeffs, candidate);
            if (!(std::abs(pc) < std::abs(p)))
                break;
            z = candidate;
            p = pc;
            dp = dpc;
        }
        if (!std::isfinite(static_cast<double>(z.real())) || !std::isfinite(static_cast<double>(z.imag())))
            throw Error(ErrorCode::RootFinderFailure, "non-finite root");
        roots.emplace_back(static_cast<double>(z.real()), static_cast<double>(z.imag()));
    }
    return roots;
}

inline bool close(Complex a, Complex b, double rel_tol)
{
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return std::abs(a - b) <= rel_tol * scale;
}

struct Cluster {
    Complex center;
    int multiplicity;
};

/// Groups numerically coincident roots; the center of a cluster is its mean,
/// which is far more accurate than the individual perturbed roots of a
/// multiple root.
inline std::vector<Cluster> cluster_roots(std::vector<Complex> roots, double rel_tol)
{
    std::vector<Cluster> clusters;
    std::vector<bool> used(roots.size(), false);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (used[i])
            continue;
        used[i] = true;
        Complex sum = roots[i];
        int count = 1;
        for (std::size_t j = i + 1; j < roots.size(); ++j) {
            if (!used[j] && close(roots[i], roots[j], rel_tol)) {
                used[j] = true;
                sum += roots[j];
                ++count;
            }
        }
        clusters.push_back({sum / static_cast<double>(count), count});
    }
    return clusters;
}

} // namespace newton_moduli::numeric
