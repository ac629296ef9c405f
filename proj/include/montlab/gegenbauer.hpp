#ifndef MONTLAB_GEGENBAUER_HPP
#define MONTLAB_GEGENBAUER_HPP

// Gegenbauer (ultraspherical) polynomials C_n^lambda on [-1,1] with weight
// w_lambda(t) = (1-t^2)^(lambda-1/2), lambda = (d-1)/2 for the sphere S^d,
// the normalized zonal functions E_n^lambda(t) = ((n+lambda)/lambda) C_n^lambda(t),
// and the hat transform
//
//   fhat(n,lambda) = (1/mass) * int_{-1}^{1} f(t) [C_n^lambda(t)/C_n^lambda(1)] w_lambda(t) dt,
//
// normalized so that fhat is the Funk-Hecke multiplier: the projection of
// x -> f(x.z) onto the degree-n harmonics equals fhat(n,lambda) E_n^lambda(x.z),
// fhat(0,lambda) of a cap indicator is the normalized cap measure, and the
// inverse expansion is f(t) = sum_n fhat(n,lambda) E_n^lambda(t).

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <vector>

#include "montlab/common.hpp"

namespace montlab {

struct QuadratureRule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
};

// n-node Gauss rule for the weight (1-t^2)^(lambda-1/2) on [-1,1], built from
// the Jacobi-matrix eigenproblem of the monic three-term recurrence
// (Golub & Welsch). Exact for polynomials of degree <= 2n-1 against the weight.
// Eigen-solver nodes are accurate to ~1e-15, which is not enough for the
// highest moments of large rules; two Newton polish steps on the orthonormal
// recurrence push nodes to machine precision, and weights come back from the
// Christoffel sum 1/sum_k q_k(x)^2.
inline QuadratureRule gaussGegenbauerRule(double lambda, int n) {
    requireArg(n >= 1, "gaussGegenbauerRule: need at least one node");
    requireArg(lambda > 0.0, "gaussGegenbauerRule: lambda must be positive");
    Eigen::VectorXd offdiag(n);  // offdiag[k] = sqrt(b_k)
    offdiag[0] = 0.0;
    for (int k = 1; k < n; ++k)
        offdiag[k] =
            std::sqrt(k * (k + 2.0 * lambda - 1.0) / (4.0 * (k + lambda) * (k + lambda - 1.0)));
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        J(k - 1, k) = offdiag[k];
        J(k, k - 1) = offdiag[k];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(J);
    const double mass = gegenbauerWeightMass(lambda);
    const double bNext =
        std::sqrt(n * (n + 2.0 * lambda - 1.0) / (4.0 * (n + lambda) * (n + lambda - 1.0)));

    // orthonormal values q_0..q_n and derivatives at x; returns Christoffel sum
    const double q0 = 1.0 / std::sqrt(mass);
    auto polish = [&](double x, double& qn, double& qnDeriv, double& christoffel) {
        double qm = 0.0, q = q0, dm = 0.0, dq = 0.0;
        christoffel = q * q;
        for (int k = 0; k < n; ++k) {
            const double bk1 = k + 1 < n ? offdiag[k + 1] : bNext;
            const double qNext = (x * q - (k > 0 ? offdiag[k] : 0.0) * qm) / bk1;
            const double dNext = (q + x * dq - (k > 0 ? offdiag[k] : 0.0) * dm) / bk1;
            qm = q;
            q = qNext;
            dm = dq;
            dq = dNext;
            if (k + 1 < n) christoffel += q * q;
        }
        qn = q;
        qnDeriv = dq;
    };

    QuadratureRule rule;
    rule.nodes = eig.eigenvalues();
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = rule.nodes[i];
        double qn = 0.0, dq = 1.0, chr = 1.0;
        for (int step = 0; step < 2; ++step) {
            polish(x, qn, dq, chr);
            if (dq != 0.0) x -= qn / dq;
        }
        polish(x, qn, dq, chr);
        rule.nodes[i] = x;
        rule.weights[i] = 1.0 / chr;
    }
    return rule;
}

// C_n^lambda(t) by the standard three-term recurrence. Exact for n = 0, 1.
template <typename Scalar>
Scalar gegenbauerRecurrence(double lambda, int n, Scalar t) {
    if (n == 0) return Scalar(1);
    Scalar prev = Scalar(1);
    Scalar cur = Scalar(2.0 * lambda) * t;
    for (int k = 2; k <= n; ++k) {
        const Scalar next =
            (Scalar(2.0 * (k - 1 + lambda)) * t * cur - Scalar(k - 2 + 2.0 * lambda) * prev) /
            Scalar(k);
        prev = cur;
        cur = next;
    }
    return cur;
}

// Writes C_0..C_L at t into out (one recurrence sweep).
inline void gegenbauerSweep(double lambda, int L, double t, Eigen::Ref<Eigen::VectorXd> out) {
    out[0] = 1.0;
    if (L == 0) return;
    out[1] = 2.0 * lambda * t;
    for (int k = 2; k <= L; ++k)
        out[k] = (2.0 * (k - 1 + lambda) * t * out[k - 1] - (k - 2 + 2.0 * lambda) * out[k - 2]) / k;
}

class GegenbauerContext {
public:
    // Degrees are capped at 256; the recurrence stays well inside double range
    // there. Quadrature has maxDegree+3 nodes, exact through degree
    // 2*maxDegree+5, and is verified against closed-form Beta moments.
    GegenbauerContext(int d, int maxDegree) : d_(d), maxDegree_(maxDegree) {
        requireArg(d >= 2, "GegenbauerContext: dimension d >= 2 required (d=1 is unsupported)");
        requireArg(maxDegree >= 0 && maxDegree <= 256,
                   "GegenbauerContext: maxDegree must be in [0,256]");
        lambda_ = 0.5 * (d - 1);
        quad_ = gaussGegenbauerRule(lambda_, maxDegree + 3);
        verifyMoments();
        atOne_.resize(maxDegree + 1);
        atOne_[0] = 1.0;  // C_n(1) = binom(n+2*lambda-1, n), by ratio recurrence
        for (int n = 1; n <= maxDegree; ++n)
            atOne_[n] = atOne_[n - 1] * (n + 2.0 * lambda_ - 1.0) / n;
    }

    int dim() const { return d_; }
    double lambda() const { return lambda_; }
    int maxDegree() const { return maxDegree_; }
    const QuadratureRule& quadrature() const { return quad_; }
    double weightMass() const { return gegenbauerWeightMass(lambda_); }

    double gegenbauerAtOne(int n) const {
        requireDomain(n >= 0 && n <= maxDegree_, "gegenbauerAtOne: degree out of range");
        return atOne_[n];
    }

private:
    void verifyMoments() const {
        const double mass = gegenbauerWeightMass(lambda_);
        Eigen::VectorXd powers = Eigen::VectorXd::Ones(quad_.nodes.size());
        for (int m = 0; m <= 2 * maxDegree_; ++m) {
            if (m > 0) powers.array() *= quad_.nodes.array();
            const double got = quad_.weights.dot(powers);
            if (m % 2 == 1) {
                requireDomain(std::abs(got) <= 1e-12 * mass,
                              "GegenbauerContext: odd quadrature moment not zero");
            } else {
                const double want = gegenbauerWeightMoment(lambda_, m);
                requireDomain(std::abs(got - want) <= 1e-12 * want,
                              "GegenbauerContext: quadrature moment check failed");
            }
        }
    }

    int d_;
    int maxDegree_;
    double lambda_;
    QuadratureRule quad_;
    Eigen::VectorXd atOne_;
};

inline double evalGegenbauer(const GegenbauerContext& ctx, int n, double t) {
    requireDomain(n >= 0 && n <= ctx.maxDegree(), "evalGegenbauer: degree out of range");
    requireDomain(std::abs(t) <= 1.0 + 1e-12, "evalGegenbauer: |t| > 1");
    t = std::clamp(t, -1.0, 1.0);
    return gegenbauerRecurrence(ctx.lambda(), n, t);
}

// E_n^lambda(t) = ((n+lambda)/lambda) C_n^lambda(t); E_n^lambda(1) = dim H_n.
inline double evalE(const GegenbauerContext& ctx, int n, double t) {
    const double c = evalGegenbauer(ctx, n, t);
    return (n + ctx.lambda()) / ctx.lambda() * c;
}

// E_0..E_L at t in one sweep; the workhorse behind Gram sums and kernels.
inline void evalESweep(const GegenbauerContext& ctx, int L, double t,
                       Eigen::Ref<Eigen::VectorXd> out) {
    requireDomain(L >= 0 && L <= ctx.maxDegree(), "evalESweep: degree out of range");
    requireDomain(std::abs(t) <= 1.0 + 1e-12, "evalESweep: |t| > 1");
    t = std::clamp(t, -1.0, 1.0);
    gegenbauerSweep(ctx.lambda(), L, t, out);
    const double lambda = ctx.lambda();
    for (int n = 0; n <= L; ++n) out[n] *= (n + lambda) / lambda;
}

struct HatCoefficients {
    double lambda = 0.0;
    Eigen::VectorXd values;  // indexed by degree n = 0..L
};

// Hat transform of a pointwise-evaluable f via the context's global rule.
inline HatCoefficients hatTransformCallable(const GegenbauerContext& ctx,
                                            const std::function<double(double)>& f, int L) {
    requireArg(L >= 0 && L <= ctx.maxDegree(), "hatTransform: L exceeds context maxDegree");
    const auto& q = ctx.quadrature();
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(L + 1);
    Eigen::VectorXd sweep(L + 1);
    for (int i = 0; i < q.nodes.size(); ++i) {
        const double fv = f(q.nodes[i]);
        if (!std::isfinite(fv))
            throw std::runtime_error("hatTransform: non-finite profile value at quadrature node");
        gegenbauerSweep(ctx.lambda(), L, q.nodes[i], sweep);
        acc += (q.weights[i] * fv) * sweep;
    }
    HatCoefficients hat;
    hat.lambda = ctx.lambda();
    hat.values = acc / ctx.weightMass();
    for (int n = 0; n <= L; ++n) hat.values[n] /= ctx.gegenbauerAtOne(n);
    return hat;
}

namespace detail {
// 64-node Gauss-Legendre rule shared by the cap-indicator paths. The kink of
// the indicator at t = tau breaks global polynomial exactness, so each tau
// gets a dedicated rule mapped onto [tau, 1] with the weight absorbed
// numerically.
inline const QuadratureRule& legendre64() {
    static const QuadratureRule rule = gaussGegenbauerRule(0.5, 64);
    return rule;
}
}  // namespace detail

// Hat coefficients of the cap indicator f_tau = 1_{[tau,1]} for n = 0..L.
inline Eigen::VectorXd capHatCoefficients(const GegenbauerContext& ctx, double tau, int L) {
    requireArg(L >= 0 && L <= ctx.maxDegree(), "capHatCoefficients: L exceeds context maxDegree");
    requireDomain(tau >= -1.0 && tau <= 1.0, "capHatCoefficients: tau must lie in [-1,1]");
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(L + 1);
    if (tau < 1.0) {
        const auto& gl = detail::legendre64();
        const double half = 0.5 * (1.0 - tau);
        Eigen::VectorXd sweep(L + 1);
        for (int i = 0; i < gl.nodes.size(); ++i) {
            const double t = tau + half * (gl.nodes[i] + 1.0);
            const double w =
                gl.weights[i] * half * std::pow(std::max(0.0, 1.0 - t * t), ctx.lambda() - 0.5);
            gegenbauerSweep(ctx.lambda(), L, t, sweep);
            acc += w * sweep;
        }
    }
    acc /= ctx.weightMass();
    for (int n = 0; n <= L; ++n) acc[n] /= ctx.gegenbauerAtOne(n);
    return acc;
}

inline double capHatCoefficient(const GegenbauerContext& ctx, double tau, int n) {
    return capHatCoefficients(ctx, tau, n)[n];
}

// int_{-1}^{1} |fhat_tau(n,lambda)|^2 dtau by a midpoint rule in tau over the
// per-tau cap rules. Decays like n^(-d-1).
inline double capHatL2Average(const GegenbauerContext& ctx, int n, int tauCells = 2048) {
    requireArg(n >= 1, "capHatL2Average: n >= 1 required");
    requireArg(tauCells >= 2, "capHatL2Average: need at least two tau cells");
    const double dtau = 2.0 / tauCells;
    double sum = 0.0;
    for (int c = 0; c < tauCells; ++c) {
        const double tau = -1.0 + (c + 0.5) * dtau;
        const double h = capHatCoefficient(ctx, tau, n);
        sum += h * h;
    }
    return sum * dtau;
}

}  // namespace montlab

#endif
