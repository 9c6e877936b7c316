#pragma once

// Expected innocent nodes when a least monitoring area is split into four
// pieces by the shifted grid, and the first/second-order conditions that pin
// the optimum at equal quarters.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace dhaiq::analysis {

/// Fractions (a1, a2, a3, a4) of the least area, non-negative and summing to one.
template <typename Scalar>
using Division = Eigen::Matrix<Scalar, 4, 1>;

template <typename Scalar>
using Matrix4 = Eigen::Matrix<Scalar, 4, 4>;

namespace detail {

template <typename Scalar>
Scalar ipow(Scalar base, int e)
{
    if (e < 0)
        return Scalar(1) / ipow(base, -e);
    Scalar r(1);
    while (e > 0) {
        if (e & 1)
            r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

inline void require_count(int k, const char* what)
{
    if (k < 0)
        throw std::domain_error(std::string(what) + ": adversary count must be non-negative");
}

} // namespace detail

template <typename Scalar>
void check_division(const Division<Scalar>& div)
{
    using std::abs;
    if ((div.array() < Scalar(0)).any())
        throw std::domain_error("division has a negative share");
    if (abs(div.sum() - Scalar(1)) > Scalar(1e-12))
        throw std::domain_error("division shares do not sum to one");
}

template <typename Scalar>
Division<Scalar> equal_quarters()
{
    return Division<Scalar>::Constant(Scalar(1) / Scalar(4));
}

/// f(a) = sum_i a_i (1 - a_i)^k.
template <typename Scalar>
Scalar objective_f(const Division<Scalar>& div, int k)
{
    check_division(div);
    detail::require_count(k, "objective_f");
    Scalar sum(0);
    for (int i = 0; i < 4; ++i)
        sum += div[i] * detail::ipow(Scalar(1) - div[i], k);
    return sum;
}

/// E(k) = mu (1 - f(a)): nodes sharing a sub-area with at least one of k adversaries.
template <typename Scalar>
Scalar expected_innocents(const Division<Scalar>& div, int k, Scalar mu)
{
    if (!(mu > Scalar(0)))
        throw std::domain_error("expected_innocents: mu must be positive");
    return mu * (Scalar(1) - objective_f(div, k));
}

/// d f / d a_i = (1 - a_i)^k - k a_i (1 - a_i)^(k-1).
template <typename Scalar>
Division<Scalar> objective_gradient(const Division<Scalar>& div, int k)
{
    detail::require_count(k, "objective_gradient");
    Division<Scalar> g;
    for (int i = 0; i < 4; ++i) {
        const Scalar rest = Scalar(1) - div[i];
        const Scalar tail = k >= 1 ? Scalar(k) * div[i] * detail::ipow(rest, k - 1) : Scalar(0);
        g[i] = detail::ipow(rest, k) - tail;
    }
    return g;
}

/// Hessian of f + lambda (sum a - 1); the constraint is linear, so only f contributes.
template <typename Scalar>
Matrix4<Scalar> lagrangian_hessian(const Division<Scalar>& div, int k)
{
    detail::require_count(k, "lagrangian_hessian");
    Matrix4<Scalar> h = Matrix4<Scalar>::Zero();
    for (int i = 0; i < 4; ++i) {
        const Scalar rest = Scalar(1) - div[i];
        Scalar d2(0);
        if (k >= 1)
            d2 -= Scalar(2 * k) * detail::ipow(rest, k - 1);
        if (k >= 2)
            d2 += Scalar(k) * Scalar(k - 1) * div[i] * detail::ipow(rest, k - 2);
        h(i, i) = d2;
    }
    return h;
}

/// Multiplier at equal quarters: (k/4 - 3/4)(3/4)^(k-1).
template <typename Scalar = double>
Scalar lagrange_multiplier(int k)
{
    if (k < 1)
        throw std::domain_error("lagrange_multiplier: k must be at least 1");
    return (Scalar(k) / Scalar(4) - Scalar(3) / Scalar(4)) * detail::ipow(Scalar(3) / Scalar(4), k - 1);
}

/// Scaled Hessian diagonal at equal quarters, g(k) = (3/4)^(k-2) (k-7)/4.
/// The exact entry is k g(k) (see lagrangian_hessian); both have the same sign.
template <typename Scalar = double>
Scalar hessian_diag(int k)
{
    if (k < 1)
        throw std::domain_error("hessian_diag: k must be at least 1");
    return detail::ipow(Scalar(3) / Scalar(4), k - 2) * (Scalar(k) - Scalar(7)) / Scalar(4);
}

/// max_i |df/da_i + lambda|.
template <typename Scalar>
Scalar stationarity_residual(const Division<Scalar>& div, int k, Scalar lambda)
{
    return (objective_gradient(div, k).array() + lambda).abs().maxCoeff();
}

/// Upper bound (mu - 1) z0 / n on the single-run innocent ratio.
template <typename Scalar = double>
Scalar innocent_bound(Scalar mu, Scalar z0, Scalar n)
{
    if (!(n > Scalar(0)))
        throw std::domain_error("innocent_bound: n must be positive");
    return (mu - Scalar(1)) * z0 / n;
}

/// Maximizer of objective_f over the simplex by brute force: a simplex grid of
/// step `resolution`, then pairwise mass transfers with a halving step.
/// Uses no derivative information.
template <typename Scalar = double>
Division<Scalar> optimal_division(int k, Scalar resolution = Scalar(0.01), int sweeps = 20)
{
    detail::require_count(k, "optimal_division");
    using std::round;
    if (!(resolution > Scalar(0)) || resolution > Scalar(1))
        throw std::domain_error("optimal_division: resolution must lie in (0, 1]");
    const int steps = std::max(1, static_cast<int>(round(Scalar(1) / resolution)));

    auto value = [k](const Division<Scalar>& d) {
        Scalar s(0);
        for (int i = 0; i < 4; ++i)
            s += d[i] * detail::ipow(Scalar(1) - d[i], k);
        return s;
    };

    Division<Scalar> best = Division<Scalar>::Zero();
    Scalar best_value(-1);
    for (int i = 0; i <= steps; ++i)
        for (int j = 0; i + j <= steps; ++j)
            for (int l = 0; i + j + l <= steps; ++l) {
                const int m = steps - i - j - l;
                Division<Scalar> d{Scalar(i), Scalar(j), Scalar(l), Scalar(m)};
                d /= Scalar(steps);
                const Scalar v = value(d);
                if (v > best_value) {
                    best_value = v;
                    best = d;
                }
            }

    Scalar delta = Scalar(1) / Scalar(steps);
    for (int sweep = 0; sweep < sweeps; ++sweep) {
        for (int from = 0; from < 4; ++from)
            for (int to = 0; to < 4; ++to) {
                if (from == to)
                    continue;
                while (best[from] >= delta) {
                    Division<Scalar> trial = best;
                    trial[from] -= delta;
                    trial[to] += delta;
                    const Scalar v = value(trial);
                    if (!(v > best_value))
                        break;
                    best = trial;
                    best_value = v;
                }
            }
        delta /= Scalar(2);
    }
    return best;
}

} // namespace dhaiq::analysis
