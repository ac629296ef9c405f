#ifndef MONTLAB_SPHERE_HPP
#define MONTLAB_SPHERE_HPP

// Spherical-harmonic Montgomery sums on S^d. The addition formula turns the
// per-degree harmonic sums
//   S_n = sum_{k<=d_n} |sum_j a_j Y_{n,k}(x_j)|^2
// into Gram sums S_n = sum_{i,j} a_i a_j E_n^lambda(x_i . x_j), which is how
// they are computed here (one recurrence sweep per point pair, O(N^2 L)).
// An explicit real orthonormal basis on S^2 up to degree 8 serves as the
// independent oracle for that identity.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>

#include "montlab/gegenbauer.hpp"
#include "montlab/kernels.hpp"
#include "montlab/pointset.hpp"

namespace montlab {

// Exact dim of the space of degree-n spherical harmonics on S^d:
// binom(n+d, d) - binom(n+d-2, d), in integer arithmetic.
inline std::int64_t dimHarmonics(int d, int n) {
    requireArg(d >= 2 && n >= 0, "dimHarmonics: d >= 2 and n >= 0 required");
    auto binom = [](int a, int b) -> __int128 {
        if (b < 0 || b > a) return 0;
        b = std::min(b, a - b);
        __int128 c = 1;
        for (int i = 1; i <= b; ++i) {
            c = c * (a - b + i) / i;
            if (c > (__int128(1) << 100))
                throw std::overflow_error("dimHarmonics: binomial overflow");
        }
        return c;
    };
    if (n == 0) return 1;
    const __int128 dn = binom(n + d, d) - binom(n + d - 2, d);
    if (dn > INT64_MAX) throw std::overflow_error("dimHarmonics: result exceeds 64-bit range");
    return static_cast<std::int64_t>(dn);
}

// S_n = sum_{i,j} a_i a_j E_n^lambda(x_i . x_j) for n = 0..L.
inline Eigen::VectorXd montgomerySumGram(const GegenbauerContext& ctx, const WeightedPointSet& ps,
                                         int L) {
    requireArg(ps.space == Space::Sphere, "montgomerySumGram: sphere point set required");
    requireArg(ps.d == ctx.dim(), "montgomerySumGram: dimension mismatch with context");
    requireArg(L >= 0 && L <= ctx.maxDegree(), "montgomerySumGram: L exceeds context maxDegree");
    const int n = ps.size();
    Eigen::VectorXd sums = Eigen::VectorXd::Zero(L + 1);
    Eigen::VectorXd sweep(L + 1);
    // diagonal: E_n(1) * sum a_i^2
    evalESweep(ctx, L, 1.0, sweep);
    sums += ps.weights.squaredNorm() * sweep;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double t = std::clamp(ps.points.row(i).dot(ps.points.row(j)), -1.0, 1.0);
            evalESweep(ctx, L, t, sweep);
            sums += (2.0 * ps.weights[i] * ps.weights[j]) * sweep;
        }
    }
    return sums;
}

namespace detail {

// Associated Legendre P_n^m(z) without Condon-Shortley phase, n <= 8.
inline double assocLegendre(int n, int m, double z) {
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    double pmm = 1.0;
    for (int k = 1; k <= m; ++k) pmm *= (2.0 * k - 1.0) * s;
    if (n == m) return pmm;
    double pm1 = z * (2.0 * m + 1.0) * pmm;
    if (n == m + 1) return pm1;
    double p = 0.0;
    for (int k = m + 2; k <= n; ++k) {
        p = ((2.0 * k - 1.0) * z * pm1 - (k - 1.0 + m) * pmm) / (k - m);
        pmm = pm1;
        pm1 = p;
    }
    return p;
}

inline double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

}  // namespace detail

// Literal evaluation of S_n from a hard-coded real orthonormal basis of H_n on
// S^2 (orthonormal with respect to the normalized surface measure), n <= 8.
// Independent of the Gegenbauer recurrence path.
inline Eigen::VectorXd explicitHarmonicsSum(const WeightedPointSet& ps, int L) {
    requireArg(ps.space == Space::Sphere && ps.d == 2, "explicitHarmonicsSum: S^2 only");
    requireArg(L >= 0 && L <= 8, "explicitHarmonicsSum: L <= 8 only");
    const int n = ps.size();
    Eigen::VectorXd sums = Eigen::VectorXd::Zero(L + 1);
    for (int deg = 0; deg <= L; ++deg) {
        // m = 0 term, then cosine/sine pairs for m = 1..deg
        double s0 = 0.0;
        for (int i = 0; i < n; ++i)
            s0 += ps.weights[i] *
                  std::sqrt(2.0 * deg + 1.0) * detail::assocLegendre(deg, 0, ps.points(i, 2));
        double total = s0 * s0;
        for (int m = 1; m <= deg; ++m) {
            const double norm = std::sqrt(2.0 * (2.0 * deg + 1.0) * detail::factorial(deg - m) /
                                          detail::factorial(deg + m));
            double sc = 0.0, ss = 0.0;
            for (int i = 0; i < n; ++i) {
                const double phi = std::atan2(ps.points(i, 1), ps.points(i, 0));
                const double p = detail::assocLegendre(deg, m, ps.points(i, 2));
                sc += ps.weights[i] * norm * p * std::cos(m * phi);
                ss += ps.weights[i] * norm * p * std::sin(m * phi);
            }
            total += sc * sc + ss * ss;
        }
        sums[deg] = total;
    }
    return sums;
}

// sum_{n<=L} S_n, the left-hand side of the refined spherical Montgomery bound.
inline double theorem2LHS(const GegenbauerContext& ctx, const WeightedPointSet& ps, int L) {
    return montgomerySumGram(ctx, ps, L).sum();
}

// L^d sum_{i,j} log(2 + L |x_i-x_j|) / (1 + L |x_i-x_j|)^{d+1} with chordal
// (Euclidean) distances; the dimensional constant is fitted by callers.
inline double theorem2RHS(const WeightedPointSet& ps, int L, int d) {
    requireArg(ps.space == Space::Sphere, "theorem2RHS: sphere point set required");
    requireArg(L >= 1, "theorem2RHS: L >= 1 required");
    const int n = ps.size();
    double sum = n * std::log(2.0);  // diagonal terms
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double r = (ps.points.row(i) - ps.points.row(j)).norm();
            sum += 2.0 * std::log(2.0 + L * r) / std::pow(1.0 + L * r, d + 1.0);
        }
    }
    return std::pow(static_cast<double>(L), d) * sum;
}

// sum_{i,j} G_L^{d+1}(x_i.x_j) (level 1) or sum_{i,j} G_L^{d+2}(x_i.x_j)
// (level 2), evaluated pairwise through the kernel series.
inline double kernelLowerBoundSum(const GegenbauerContext& ctx, const WeightedPointSet& ps, int L,
                                  int level) {
    requireArg(ps.space == Space::Sphere, "kernelLowerBoundSum: sphere point set required");
    requireArg(level == 1 || level == 2, "kernelLowerBoundSum: level must be 1 or 2");
    requireArg(L >= 0 && L <= ctx.maxDegree(), "kernelLowerBoundSum: L exceeds context maxDegree");
    const KernelSeries series = level == 1 ? gSeries1(ctx.dim(), L) : gSeries2(ctx.dim(), L);
    const int n = ps.size();
    Eigen::VectorXd sweep(L + 1);
    evalESweep(ctx, L, 1.0, sweep);
    double sum = ps.weights.squaredNorm() * series.coeff.dot(sweep);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double t = std::clamp(ps.points.row(i).dot(ps.points.row(j)), -1.0, 1.0);
            evalESweep(ctx, L, t, sweep);
            sum += 2.0 * ps.weights[i] * ps.weights[j] * series.coeff.dot(sweep);
        }
    }
    return sum;
}

}  // namespace montlab

#endif
