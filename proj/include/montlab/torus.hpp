#ifndef MONTLAB_TORUS_HPP
#define MONTLAB_TORUS_HPP

// Exponential-sum spectra, heat kernels and the heat-comparison chain on the
// flat unit-volume torus T^d. Eigenfunctions of -Delta are explicit: the
// constant, and sqrt(2) cos(2 pi k.x), sqrt(2) sin(2 pi k.x) per lattice class
// {k,-k}, with eigenvalue 4 pi^2 |k|^2. The count window enumerates them in a
// fixed total order (by |k|^2, then lexicographic on the class representative,
// cosine before sine).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

#include "montlab/pointset.hpp"

namespace montlab {

struct RegimeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SpectrumWindow {
    enum class Mode { Cube, Count };
    Mode mode = Mode::Cube;
    int X = 0;

    static SpectrumWindow cube(int X) { return {Mode::Cube, X}; }
    static SpectrumWindow count(int X) { return {Mode::Count, X}; }
};

struct TorusEigenfunction {
    enum class Type { Const, Cos, Sin };
    Type type = Type::Const;
    Eigen::VectorXi k;
    double eigenvalue = 0.0;  // 4 pi^2 |k|^2
};

namespace detail {

// Class representatives {k,-k} with 0 < |k|^2 <= bound, canonical sign
// (first nonzero coordinate positive), sorted by (|k|^2, lex).
inline std::vector<Eigen::VectorXi> latticeRepresentatives(int d, long long bound) {
    std::vector<Eigen::VectorXi> reps;
    const int R = static_cast<int>(std::floor(std::sqrt(static_cast<double>(bound))));
    Eigen::VectorXi k = Eigen::VectorXi::Constant(d, -R);
    while (true) {
        long long norm2 = 0;
        for (int j = 0; j < d; ++j) norm2 += static_cast<long long>(k[j]) * k[j];
        if (norm2 > 0 && norm2 <= bound) {
            int firstNonzero = 0;
            while (k[firstNonzero] == 0) ++firstNonzero;
            if (k[firstNonzero] > 0) reps.push_back(k);
        }
        int axis = d - 1;
        while (axis >= 0 && k[axis] == R) k[axis--] = -R;
        if (axis < 0) break;
        ++k[axis];
    }
    std::sort(reps.begin(), reps.end(), [](const Eigen::VectorXi& a, const Eigen::VectorXi& b) {
        const long long na = a.cast<long long>().squaredNorm();
        const long long nb = b.cast<long long>().squaredNorm();
        if (na != nb) return na < nb;
        return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(),
                                            b.data() + b.size());
    });
    return reps;
}

}  // namespace detail

// The first `count` eigenfunctions in the fixed total order.
inline std::vector<TorusEigenfunction> torusEigenbasis(int d, int count) {
    requireArg(d >= 1 && count >= 1, "torusEigenbasis: d >= 1 and count >= 1 required");
    std::vector<TorusEigenfunction> fns;
    fns.push_back({TorusEigenfunction::Type::Const, Eigen::VectorXi::Zero(d), 0.0});
    long long bound = 4;
    while (static_cast<int>(fns.size()) < count) {
        const auto reps = detail::latticeRepresentatives(d, bound);
        if (1 + 2 * static_cast<long long>(reps.size()) >= count) {
            fns.resize(1);
            for (const auto& k : reps) {
                const double ev = 4.0 * M_PI * M_PI * k.cast<double>().squaredNorm();
                fns.push_back({TorusEigenfunction::Type::Cos, k, ev});
                fns.push_back({TorusEigenfunction::Type::Sin, k, ev});
                if (static_cast<int>(fns.size()) >= count + 1) break;
            }
        }
        if (static_cast<int>(fns.size()) >= count) break;
        bound *= 2;
    }
    fns.resize(count);
    return fns;
}

inline double evalTorusEigenfunction(const TorusEigenfunction& fn,
                                     const Eigen::Ref<const Eigen::RowVectorXd>& x) {
    switch (fn.type) {
        case TorusEigenfunction::Type::Const:
            return 1.0;
        case TorusEigenfunction::Type::Cos:
            return std::sqrt(2.0) * std::cos(2.0 * M_PI * fn.k.cast<double>().dot(x));
        case TorusEigenfunction::Type::Sin:
            return std::sqrt(2.0) * std::sin(2.0 * M_PI * fn.k.cast<double>().dot(x));
    }
    return 0.0;
}

namespace detail {

// |sum_n a_n e^{2 pi i k.x_n}|^2 for every k in the cube |k_j| <= X,
// lexicographic order. Per-point phase tables keep it at O(N (2X+1)^d).
inline Eigen::VectorXd cubeWindowSpectrum(const WeightedPointSet& ps, int X) {
    const int d = ps.d;
    const int n = ps.size();
    const int side = 2 * X + 1;
    long long total = 1;
    for (int j = 0; j < d; ++j) total *= side;
    // cos/sin(2 pi k x) for k = 0..X per point and axis
    Eigen::MatrixXd cosTab(n * d, X + 1), sinTab(n * d, X + 1);
    for (int p = 0; p < n; ++p)
        for (int a = 0; a < d; ++a)
            for (int k = 0; k <= X; ++k) {
                cosTab(p * d + a, k) = std::cos(2.0 * M_PI * k * ps.points(p, a));
                sinTab(p * d + a, k) = std::sin(2.0 * M_PI * k * ps.points(p, a));
            }
    Eigen::VectorXd out(total);
    Eigen::VectorXi k = Eigen::VectorXi::Constant(d, -X);
    long long idx = 0;
    while (true) {
        double re = 0.0, im = 0.0;
        for (int p = 0; p < n; ++p) {
            double c = 1.0, s = 0.0;
            for (int a = 0; a < d; ++a) {
                const int ka = k[a];
                const double ca = cosTab(p * d + a, std::abs(ka));
                const double sa = ka >= 0 ? sinTab(p * d + a, ka) : -sinTab(p * d + a, -ka);
                const double c2 = c * ca - s * sa;
                s = c * sa + s * ca;
                c = c2;
            }
            re += ps.weights[p] * c;
            im += ps.weights[p] * s;
        }
        out[idx++] = re * re + im * im;
        int axis = d - 1;
        while (axis >= 0 && k[axis] == X) k[axis--] = -X;
        if (axis < 0) break;
        ++k[axis];
    }
    return out;
}

}  // namespace detail

// Squared weighted sums against the window's eigenfunctions, one entry per
// retained index.
inline Eigen::VectorXd exponentialSumSpectrum(const WeightedPointSet& ps,
                                              const SpectrumWindow& window) {
    requireArg(ps.space == Space::Torus, "exponentialSumSpectrum: torus point set required");
    requireArg(window.X >= 0, "exponentialSumSpectrum: X >= 0 required");
    if (window.mode == SpectrumWindow::Mode::Cube) return detail::cubeWindowSpectrum(ps, window.X);
    const auto basis = torusEigenbasis(ps.d, window.X + 1);
    Eigen::VectorXd out(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) {
        double s = 0.0;
        for (int p = 0; p < ps.size(); ++p)
            s += ps.weights[p] * evalTorusEigenfunction(basis[i], ps.points.row(p));
        out[i] = s * s;
    }
    return out;
}

struct MontgomeryLemmaReport {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

// Classical Montgomery Lemma on T^2: cube-window total >= N X^2.
inline MontgomeryLemmaReport montgomeryLemmaCheck(const WeightedPointSet& ps, int X) {
    requireArg(ps.space == Space::Torus && ps.d == 2, "montgomeryLemmaCheck: T^2 required");
    requireArg(ps.unitWeights(), "montgomeryLemmaCheck: unit weights required");
    MontgomeryLemmaReport r;
    r.lhs = exponentialSumSpectrum(ps, SpectrumWindow::cube(X)).sum();
    r.rhs = static_cast<double>(ps.size()) * X * X;
    r.holds = r.lhs >= r.rhs - 1e-9 * r.lhs;
    return r;
}

struct Theorem1Report {
    double lhs = 0.0;
    double rhsCore = 0.0;  // (sum a_i^2) X / (log X)^{d/2}
    double ratio = 0.0;
};

inline Theorem1Report theorem1Functional(const WeightedPointSet& ps, int X) {
    requireArg(ps.space == Space::Torus, "theorem1Functional: torus point set required");
    requireDomain(X >= 2, "theorem1Functional: X >= 2 required");
    Theorem1Report r;
    r.lhs = exponentialSumSpectrum(ps, SpectrumWindow::count(X)).sum();
    r.rhsCore = ps.weights.squaredNorm() * X / std::pow(std::log(X), ps.d / 2.0);
    r.ratio = r.rhsCore > 0.0 ? r.lhs / r.rhsCore : 0.0;
    return r;
}

struct HeatParameters {
    double t = 0.0;
    int truncation = 0;  // per-axis lattice radius for the theta series
};

// Radius keeping the omitted theta-series terms below 1e-14 of the value.
inline int heatTruncationRadius(double t, double absDelta) {
    return static_cast<int>(std::ceil(absDelta + std::sqrt(150.0 * t) + 1.0));
}

inline HeatParameters heatParameters(double t, double maxAbsDelta = 0.5) {
    requireDomain(t > 0.0, "heatParameters: t > 0 required");
    return {t, heatTruncationRadius(t, maxAbsDelta)};
}

namespace detail {

inline double wrapToHalf(double delta) {
    double w = delta - std::round(delta);
    if (w == -0.5) w = 0.5;
    return w;
}

}  // namespace detail

// Gaussian-periodized (theta series) heat kernel on the unit-volume torus,
// p_t(x,y) = prod_axis (4 pi t)^{-1/2} sum_m exp(-(delta_a - m)^2 / (4t)).
inline double heatKernel(const Eigen::Ref<const Eigen::RowVectorXd>& x,
                         const Eigen::Ref<const Eigen::RowVectorXd>& y, const HeatParameters& p) {
    requireDomain(p.t > 0.0, "heatKernel: t > 0 required");
    requireArg(x.size() == y.size(), "heatKernel: dimension mismatch");
    const double t = p.t;
    double value = 1.0;
    for (int a = 0; a < x.size(); ++a) {
        const double delta = detail::wrapToHalf(x[a] - y[a]);
        double s = 0.0;
        for (int m = -p.truncation; m <= p.truncation; ++m) {
            const double r = delta - m;
            s += std::exp(-r * r / (4.0 * t));
        }
        value *= s / std::sqrt(4.0 * M_PI * t);
    }
    return value;
}

inline double heatKernel(const Eigen::Ref<const Eigen::RowVectorXd>& x,
                         const Eigen::Ref<const Eigen::RowVectorXd>& y, double t) {
    return heatKernel(x, y, heatParameters(t));
}

// Spectral form sum_k e^{-4 pi^2 |k|^2 t} e^{2 pi i k.(x-y)}, factored per
// axis; agrees with the theta series by Poisson summation.
inline double heatKernelSpectral(const Eigen::Ref<const Eigen::RowVectorXd>& x,
                                 const Eigen::Ref<const Eigen::RowVectorXd>& y, double t) {
    requireDomain(t > 0.0, "heatKernelSpectral: t > 0 required");
    requireArg(x.size() == y.size(), "heatKernelSpectral: dimension mismatch");
    const int K = static_cast<int>(std::ceil(std::sqrt(42.0 / (4.0 * M_PI * M_PI * t)))) + 1;
    double value = 1.0;
    for (int a = 0; a < x.size(); ++a) {
        const double delta = x[a] - y[a];
        double s = 1.0;
        for (int k = 1; k <= K; ++k)
            s += 2.0 * std::exp(-4.0 * M_PI * M_PI * k * k * t) * std::cos(2.0 * M_PI * k * delta);
        value *= s;
    }
    return value;
}

// Incomplete-Gamma style spectral tail bound
//   t^{-(d-1/2)} (X^{2/d} t)^{d-3/2} exp(-c X^{2/d} t),
// valid in the asymptotic regime X^{2/d} t >= 4.
inline double tailBound(int X, double t, int d, double c = 1.0) {
    requireArg(X >= 1 && d >= 1, "tailBound: X >= 1 and d >= 1 required");
    requireDomain(t > 0.0 && c > 0.0, "tailBound: t > 0 and c > 0 required");
    const double a = std::pow(static_cast<double>(X), 2.0 / d) * t;
    if (a < 4.0) throw RegimeError("tailBound: regime X^(2/d) t >= 4 violated");
    return std::pow(t, -(d - 0.5)) * std::pow(a, d - 1.5) * std::exp(-c * a);
}

// Exact ordered-spectrum tail sum_{k>X} e^{-lambda_k t} sup|phi_k|^2 on T^d
// (sup^2 = 2 for every nonconstant eigenfunction), summed until the terms are
// negligible.
inline double exactSpectralTail(int d, int X, double t) {
    requireDomain(t > 0.0, "exactSpectralTail: t > 0 required");
    // all eigenvalues with e^{-lambda t} >= 1e-25 relative to the first tail term
    int count = X + 2;
    double tail = 0.0;
    while (true) {
        const auto basis = torusEigenbasis(d, count);
        tail = 0.0;
        for (int k = X + 1; k < count; ++k) tail += 2.0 * std::exp(-basis[k].eigenvalue * t);
        const double lastTerm = 2.0 * std::exp(-basis[count - 1].eigenvalue * t);
        if (lastTerm <= 1e-25 * std::max(tail, 1e-300)) break;
        count *= 2;
    }
    return tail;
}

// Shrinks c (starting at 1, halving) until tailBound dominates the exact
// spectral tails on T^1 and T^2 across a regime grid of (X, t).
inline double calibrateTailConstant() {
    double c = 1.0;
    const int Xs[] = {16, 64, 256, 1024};
    const double margins[] = {4.0, 8.0, 16.0, 32.0};
    while (c >= 1.0 / 64.0) {
        bool ok = true;
        for (int d = 1; d <= 2 && ok; ++d)
            for (int X : Xs)
                for (double m : margins) {
                    const double t = m / std::pow(static_cast<double>(X), 2.0 / d);
                    if (tailBound(X, t, d, c) < exactSpectralTail(d, X, t)) {
                        ok = false;
                        break;
                    }
                }
        if (ok) return c;
        c /= 2.0;
    }
    throw std::runtime_error("calibrateTailConstant: no dominating constant found");
}

struct HeatChainReport {
    int d = 0;
    int X = 0;
    double c = 1.0;       // tail-bound constant
    double A = 0.0;       // time multiplier, A = (1/c)(1 - 1/d) + 1
    double t = 0.0;       // A X^{-2/d} log X
    double spectralLHS = 0.0;
    double dampedSum = 0.0;      // sum_{k<=X} e^{-lambda_k t} |.|^2
    double tailSum = 0.0;        // sum_{k>X} e^{-lambda_k t} |.|^2
    double heatQuadForm = 0.0;   // sum_{i,j} a_i a_j p_t(x_i, x_j)
    double tailTermBound = 0.0;  // (sum a_i)^2 tailBound
    double diagQuadForm = 0.0;   // sum_i a_i^2 p_t(x_i, x_i)
    double diagScale = 0.0;      // t^{-d/2} sum a_i^2
    double margin = 0.0;         // spectralLHS - (heatQuadForm - tailTermBound)
    double ratio = 0.0;          // lhs / ((sum a_i^2) X / (log X)^{d/2})
    double ratioNoLog = 0.0;     // lhs / ((sum a_i^2) X)
};

// Numerical walk through the heat-kernel comparison chain at the canonical
// time t = A X^{-2/d} log X.
inline HeatChainReport heatComparisonDiagnostic(const WeightedPointSet& ps, int X,
                                                double c = 1.0) {
    requireArg(ps.space == Space::Torus, "heatComparisonDiagnostic: torus point set required");
    requireDomain(X >= 2, "heatComparisonDiagnostic: X >= 2 required");
    HeatChainReport r;
    r.d = ps.d;
    r.X = X;
    r.c = c;
    r.A = (1.0 / c) * (1.0 - 1.0 / ps.d) + 1.0;
    r.t = r.A * std::pow(static_cast<double>(X), -2.0 / ps.d) * std::log(X);
    const double a = std::pow(static_cast<double>(X), 2.0 / ps.d) * r.t;
    if (a < 4.0)
        throw RegimeError("heatComparisonDiagnostic: X too small for the tail-bound regime");

    // count enough eigenfunctions that the remaining damped terms are negligible
    int count = X + 1;
    {
        const double lambdaMax = 60.0 / r.t;
        long long bound = static_cast<long long>(lambdaMax / (4.0 * M_PI * M_PI)) + 2;
        count = std::max<long long>(count, 1 + 2 * static_cast<long long>(detail::latticeRepresentatives(ps.d, bound).size()));
    }
    const auto basis = torusEigenbasis(ps.d, count);
    Eigen::VectorXd sums(count);
    for (int k = 0; k < count; ++k) {
        double s = 0.0;
        for (int p = 0; p < ps.size(); ++p)
            s += ps.weights[p] * evalTorusEigenfunction(basis[k], ps.points.row(p));
        sums[k] = s * s;
    }
    r.spectralLHS = sums.head(X + 1).sum();
    for (int k = 0; k <= X; ++k) r.dampedSum += std::exp(-basis[k].eigenvalue * r.t) * sums[k];
    for (int k = X + 1; k < count; ++k) r.tailSum += std::exp(-basis[k].eigenvalue * r.t) * sums[k];

    const HeatParameters hp = heatParameters(r.t);
    for (int i = 0; i < ps.size(); ++i) {
        r.diagQuadForm += ps.weights[i] * ps.weights[i] *
                          heatKernel(ps.points.row(i), ps.points.row(i), hp);
        for (int j = 0; j < ps.size(); ++j)
            r.heatQuadForm += ps.weights[i] * ps.weights[j] *
                              heatKernel(ps.points.row(i), ps.points.row(j), hp);
    }
    const double weightSum = ps.weights.sum();
    r.tailTermBound = weightSum * weightSum * tailBound(X, r.t, ps.d, c);
    r.diagScale = std::pow(r.t, -ps.d / 2.0) * ps.weights.squaredNorm();
    r.margin = r.spectralLHS - (r.heatQuadForm - r.tailTermBound);
    const double core = ps.weights.squaredNorm() * X / std::pow(std::log(X), ps.d / 2.0);
    r.ratio = core > 0.0 ? r.spectralLHS / core : 0.0;
    const double coreNoLog = ps.weights.squaredNorm() * X;
    r.ratioNoLog = coreNoLog > 0.0 ? r.spectralLHS / coreNoLog : 0.0;
    return r;
}

inline double torusDistance(const Eigen::Ref<const Eigen::RowVectorXd>& x,
                            const Eigen::Ref<const Eigen::RowVectorXd>& y) {
    double sq = 0.0;
    for (int a = 0; a < x.size(); ++a) {
        const double w = detail::wrapToHalf(x[a] - y[a]);
        sq += w * w;
    }
    return std::sqrt(sq);
}

// sum_{i,j} X^2 / (1 + X^4 |x_i-x_j|^4) in the flat-torus metric; compared
// against the ball-window total.
inline double clusteringDiagnosticTorus(const WeightedPointSet& ps, int X) {
    requireArg(ps.space == Space::Torus && ps.d == 2, "clusteringDiagnosticTorus: T^2 required");
    requireArg(ps.unitWeights(), "clusteringDiagnosticTorus: unit weights required");
    const int n = ps.size();
    double sum = static_cast<double>(n) * X * X;  // diagonal
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double rr = torusDistance(ps.points.row(i), ps.points.row(j));
            sum += 2.0 * X * X / (1.0 + std::pow(static_cast<double>(X) * rr, 4.0));
        }
    return sum;
}

// sum over the ball |k| <= X (including k = 0) of |sum_n a_n e^{2 pi i k.x_n}|^2.
inline double ballWindowTotal(const WeightedPointSet& ps, int X) {
    requireArg(ps.space == Space::Torus, "ballWindowTotal: torus point set required");
    const Eigen::VectorXd cube = detail::cubeWindowSpectrum(ps, X);
    const int d = ps.d;
    double total = 0.0;
    Eigen::VectorXi k = Eigen::VectorXi::Constant(d, -X);
    long long idx = 0;
    while (true) {
        if (k.cast<long long>().squaredNorm() <= static_cast<long long>(X) * X) total += cube[idx];
        ++idx;
        int axis = d - 1;
        while (axis >= 0 && k[axis] == X) k[axis--] = -X;
        if (axis < 0) break;
        ++k[axis];
    }
    return total;
}

}  // namespace montlab

#endif
