#ifndef MONTLAB_KERNELS_HPP
#define MONTLAB_KERNELS_HPP

// Cesaro-type kernels K_L^delta(t) = sum_{k<=L} (A_{L-k}^delta / A_L^delta) E_k^lambda(t),
// nonnegative on [-1,1] for delta >= d (Kogbetliantz), and their once/twice
// averaged versions
//   G_n^{d+1}(t) = mean_{j<=n} K_j^d(t),   G_n^{d+2}(t) = mean_{j<=n} G_j^{d+1}(t),
// which admit pointwise lower bounds of envelope type
//   c n^d (1+n theta)^{-d-1}            (for G^{d+1})
//   C n^d (1+n theta)^{-d-1} log(2+n theta)   (for G^{d+2}).
//
// All three kernels are represented as coefficient series in the E_k basis;
// evaluation at any t is a single recurrence sweep.

#include <Eigen/Dense>

#include <cmath>

#include "montlab/gegenbauer.hpp"

namespace montlab {

struct CesaroCoefficients {
    double delta = 0.0;
    Eigen::VectorXd values;  // A_j^delta, j = 0..L
};

// A_j^delta = Gamma(j+delta+1) / (Gamma(j+1) Gamma(delta+1)) by the ratio
// recurrence A_j = A_{j-1} (j+delta)/j, which avoids Gamma overflow.
inline CesaroCoefficients cesaroCoefficients(double delta, int L) {
    requireDomain(delta > 0.0, "cesaroCoefficients: delta must be positive");
    requireArg(L >= 0, "cesaroCoefficients: L must be nonnegative");
    CesaroCoefficients c;
    c.delta = delta;
    c.values.resize(L + 1);
    c.values[0] = 1.0;
    for (int j = 1; j <= L; ++j) c.values[j] = c.values[j - 1] * (j + delta) / j;
    return c;
}

// A kernel as a series sum_k coeff[k] E_k^lambda(t) for the dimension d it was
// built for.
struct KernelSeries {
    enum class Kind { Cesaro, G1, G2 };
    Kind kind = Kind::Cesaro;
    int d = 0;
    double delta = 0.0;
    Eigen::VectorXd coeff;

    int degree() const { return static_cast<int>(coeff.size()) - 1; }
};

inline KernelSeries cesaroSeries(int d, double delta, int L) {
    requireArg(d >= 2, "cesaroSeries: d >= 2 required");
    const CesaroCoefficients A = cesaroCoefficients(delta, L);
    KernelSeries s;
    s.kind = KernelSeries::Kind::Cesaro;
    s.d = d;
    s.delta = delta;
    s.coeff.resize(L + 1);
    for (int k = 0; k <= L; ++k) s.coeff[k] = A.values[L - k] / A.values[L];
    return s;
}

// G_n^{d+1} as a series: coefficient of E_k is mean_{j=k..n} A_{j-k}^d / A_j^d.
inline KernelSeries gSeries1(int d, int n) {
    requireArg(d >= 2 && n >= 0, "gSeries1: d >= 2 and n >= 0 required");
    const CesaroCoefficients A = cesaroCoefficients(static_cast<double>(d), n);
    KernelSeries s;
    s.kind = KernelSeries::Kind::G1;
    s.d = d;
    s.delta = static_cast<double>(d);
    s.coeff = Eigen::VectorXd::Zero(n + 1);
    for (int j = 0; j <= n; ++j)
        for (int k = 0; k <= j; ++k) s.coeff[k] += A.values[j - k] / A.values[j];
    s.coeff /= n + 1.0;
    return s;
}

// G_n^{d+2} as a series. Swapping the averaging order gives the coefficient of
// E_k as mean over i of (A_{i-k}^d/A_i^d) * sum_{j=i..n} 1/(j+1), so the double
// average costs O(n^2) once instead of O(n^3).
inline KernelSeries gSeries2(int d, int n) {
    requireArg(d >= 2 && n >= 0, "gSeries2: d >= 2 and n >= 0 required");
    const CesaroCoefficients A = cesaroCoefficients(static_cast<double>(d), n);
    Eigen::VectorXd suffixHarmonic(n + 2);
    suffixHarmonic[n + 1] = 0.0;
    for (int j = n; j >= 0; --j) suffixHarmonic[j] = suffixHarmonic[j + 1] + 1.0 / (j + 1);
    KernelSeries s;
    s.kind = KernelSeries::Kind::G2;
    s.d = d;
    s.delta = static_cast<double>(d);
    s.coeff = Eigen::VectorXd::Zero(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double h = suffixHarmonic[i];
        for (int k = 0; k <= i; ++k) s.coeff[k] += (A.values[i - k] / A.values[i]) * h;
    }
    s.coeff /= n + 1.0;
    return s;
}

inline double evalKernelSeries(const GegenbauerContext& ctx, const KernelSeries& s, double t) {
    requireArg(ctx.dim() == s.d, "evalKernelSeries: context dimension mismatch");
    Eigen::VectorXd sweep(s.coeff.size());
    evalESweep(ctx, s.degree(), t, sweep);
    return s.coeff.dot(sweep);
}

inline double cesaroKernel(const GegenbauerContext& ctx, double delta, int L, double t) {
    requireArg(L <= ctx.maxDegree(), "cesaroKernel: L exceeds context maxDegree");
    return evalKernelSeries(ctx, cesaroSeries(ctx.dim(), delta, L), t);
}

inline double gKernel1(const GegenbauerContext& ctx, int n, double t) {
    requireArg(n <= ctx.maxDegree(), "gKernel1: n exceeds context maxDegree");
    return evalKernelSeries(ctx, gSeries1(ctx.dim(), n), t);
}

inline double gKernel2(const GegenbauerContext& ctx, int n, double t) {
    requireArg(n <= ctx.maxDegree(), "gKernel2: n exceeds context maxDegree");
    return evalKernelSeries(ctx, gSeries2(ctx.dim(), n), t);
}

// C n^d (1+n theta)^{-d-1} log(2+n theta); the lower-bound envelope shape.
inline double envelopeLowerBound(int d, int n, double theta, double C) {
    requireArg(d >= 2 && n >= 1, "envelopeLowerBound: d >= 2 and n >= 1 required");
    requireArg(C > 0.0, "envelopeLowerBound: C must be positive");
    requireDomain(theta > 0.0 && theta <= M_PI, "envelopeLowerBound: theta outside (0,pi]");
    const double s = 1.0 + n * theta;
    return C * std::pow(static_cast<double>(n), d) * std::pow(s, -(d + 1.0)) * std::log(2.0 + n * theta);
}

// Same shape without the logarithm; the G^{d+1} envelope.
inline double envelopeLowerBoundNoLog(int d, int n, double theta, double c) {
    requireArg(d >= 2 && n >= 1, "envelopeLowerBoundNoLog: d >= 2 and n >= 1 required");
    requireArg(c > 0.0, "envelopeLowerBoundNoLog: c must be positive");
    requireDomain(theta > 0.0 && theta <= M_PI, "envelopeLowerBoundNoLog: theta outside (0,pi]");
    const double s = 1.0 + n * theta;
    return c * std::pow(static_cast<double>(n), d) * std::pow(s, -(d + 1.0));
}

// Evaluated kernel samples on a t-grid (used by grid scans and reports).
struct KernelTable {
    KernelSeries::Kind kind = KernelSeries::Kind::Cesaro;
    int d = 0;
    Eigen::VectorXd ts;
    Eigen::VectorXd values;
};

inline KernelTable tabulateKernel(const GegenbauerContext& ctx, const KernelSeries& s,
                                  const Eigen::VectorXd& ts) {
    KernelTable table;
    table.kind = s.kind;
    table.d = s.d;
    table.ts = ts;
    table.values.resize(ts.size());
    Eigen::VectorXd sweep(s.coeff.size());
    for (int i = 0; i < ts.size(); ++i) {
        evalESweep(ctx, s.degree(), ts[i], sweep);
        table.values[i] = s.coeff.dot(sweep);
    }
    return table;
}

}  // namespace montlab

#endif
