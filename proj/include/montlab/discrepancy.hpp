#ifndef MONTLAB_DISCREPANCY_HPP
#define MONTLAB_DISCREPANCY_HPP

// L^2 discrepancies and discrete energies on S^d.
//
// The spectral route comes from Funk-Hecke: with G(x) = (1/N) sum_j f(x.z_j),
//   D^2_{L^2,f}(Z) = (1/N^2) sum_{n>=1} fhat(n,lambda)^2 S_n,
// where S_n are the Gram sums of the sphere module. The generalized Stolarsky
// identity evaluates the same quantity as a discrete energy minus the energy
// integral, with the potential F defined by Fhat = (fhat)^2, synthesized here
// as F(t) = sum_n fhat(n,lambda)^2 E_n^lambda(t) (the inverse of the hat
// transform, pinned by a round-trip test). The cap version is checked against
// the classical Stolarsky principle
//   c_d D^2_{L^2,cap}(Z) = J_d - (1/N^2) sum |z_i - z_j|,
// with c_d calibrated from the direct definition.

#include <Eigen/Dense>

#include <cmath>
#include <vector>

#include "montlab/profile.hpp"
#include "montlab/sphere.hpp"

namespace montlab {

struct SpectralDiscrepancy {
    double d2 = 0.0;
    double value = 0.0;            // sqrt(d2)
    double truncationBound = 0.0;  // estimate of sum_{n>L} fhat^2 d_n
};

struct MonteCarloDiscrepancy {
    double d2 = 0.0;
    double value = 0.0;
    double standardError = 0.0;  // of the d2 estimate
};

namespace detail {

// Worst-case tail sum_{n>L} fhat(n)^2 d_n estimated from the computed range
// (L, M] plus an n^{-2}-type extrapolation beyond M. With no headroom beyond
// L the extrapolation anchors on the trailing computed terms instead.
inline double hatTailBound(const GegenbauerContext& ctx, const Eigen::VectorXd& hat, int L,
                           bool extrapolate) {
    const int M = static_cast<int>(hat.size()) - 1;
    double partial = 0.0;
    for (int n = L + 1; n <= M; ++n)
        partial += hat[n] * hat[n] * static_cast<double>(dimHarmonics(ctx.dim(), n));
    const int back = std::min(8, M);
    if (!extrapolate || back <= 0) return partial;
    double lastMean = 0.0;
    for (int n = M - back + 1; n <= M; ++n)
        lastMean += hat[n] * hat[n] * static_cast<double>(dimHarmonics(ctx.dim(), n));
    lastMean /= back;
    return partial + 2.0 * M * lastMean;
}

}  // namespace detail

// Spectral evaluation of D_{L^2,f}; exact up to degree truncation at L.
inline SpectralDiscrepancy discrepancyL2Spectral(const GegenbauerContext& ctx,
                                                 const ProfileFunction& f,
                                                 const WeightedPointSet& ps, int L) {
    requireArg(ps.space == Space::Sphere, "discrepancyL2Spectral: sphere point set required");
    requireArg(L >= 0 && L <= ctx.maxDegree(), "discrepancyL2Spectral: L exceeds maxDegree");
    // Finite series end exactly at their degree; everything else gets an
    // n^{-2}-extrapolated worst-case tail from the coefficients beyond L.
    const bool series = f.kind() == ProfileFunction::Kind::GegenbauerSeries;
    const int hatDegree = series ? std::min(std::max(L, f.seriesDegree()), ctx.maxDegree())
                                 : std::min(2 * L, ctx.maxDegree());
    const HatCoefficients hat = hatTransform(ctx, f, hatDegree);
    const Eigen::VectorXd sums = montgomerySumGram(ctx, ps, L);
    const double n2 = static_cast<double>(ps.size()) * ps.size();
    SpectralDiscrepancy out;
    for (int n = 1; n <= L; ++n) out.d2 += hat.values[n] * hat.values[n] * sums[n];
    out.d2 /= n2;
    out.value = std::sqrt(std::max(0.0, out.d2));
    out.truncationBound = detail::hatTailBound(ctx, hat.values, L, !series);
    return out;
}

// Monte Carlo evaluation of the defining integral, uniform x samples on S^d.
inline MonteCarloDiscrepancy discrepancyL2MonteCarlo(const GegenbauerContext& ctx,
                                                     const ProfileFunction& f,
                                                     const WeightedPointSet& ps, long samples,
                                                     std::uint64_t seed) {
    requireArg(ps.space == Space::Sphere, "discrepancyL2MonteCarlo: sphere point set required");
    requireArg(samples >= 2, "discrepancyL2MonteCarlo: need at least two samples");
    const double mean = hatTransform(ctx, f, 0).values[0];  // int f(x.y) dsigma(y)
    const int dim = ps.d + 1;
    const int n = ps.size();
    double acc = 0.0, acc2 = 0.0;
    constexpr long kBatch = 8192;
    Eigen::VectorXd x(dim);
    for (long done = 0; done < samples;) {
        const long batch = std::min(kBatch, samples - done);
        Rng rng(deriveSeed(seed, static_cast<std::uint64_t>(done / kBatch)));
        for (long s = 0; s < batch; ++s) {
            double norm2 = 0.0;
            do {
                for (int j = 0; j < dim; ++j) x[j] = rng.gaussian();
                norm2 = x.squaredNorm();
            } while (norm2 < 1e-24);
            x /= std::sqrt(norm2);
            double g = 0.0;
            for (int i = 0; i < n; ++i) g += f.evaluate(ps.points.row(i).dot(x));
            g /= n;
            const double v = (g - mean) * (g - mean);
            acc += v;
            acc2 += v * v;
        }
        done += batch;
    }
    MonteCarloDiscrepancy out;
    out.d2 = acc / samples;
    out.value = std::sqrt(std::max(0.0, out.d2));
    const double var = std::max(0.0, acc2 / samples - out.d2 * out.d2);
    out.standardError = std::sqrt(var / samples);
    return out;
}

struct SpectralMethod {
    int degree = 32;
};
struct MonteCarloMethod {
    long samples = 100000;
    std::uint64_t seed = 0;
};

inline double discrepancyL2(const GegenbauerContext& ctx, const ProfileFunction& f,
                            const WeightedPointSet& ps, const SpectralMethod& m) {
    return discrepancyL2Spectral(ctx, f, ps, m.degree).value;
}

inline double discrepancyL2(const GegenbauerContext& ctx, const ProfileFunction& f,
                            const WeightedPointSet& ps, const MonteCarloMethod& m) {
    return discrepancyL2MonteCarlo(ctx, f, ps, m.samples, m.seed).value;
}

struct DirectCapDiscrepancy {
    double d2 = 0.0;
    double standardError = 0.0;
};

// D^2_{L^2,cap} straight from the definition: Monte Carlo over the cap center
// x, midpoint rule over tau (the integrand is bounded with dense kinks, so a
// fixed 2048-cell rule keeps the tau error subdominant to the Monte Carlo
// noise).
inline DirectCapDiscrepancy capDiscrepancyDirect(const GegenbauerContext& ctx,
                                                 const WeightedPointSet& ps, long samples,
                                                 std::uint64_t seed, int cells = 2048) {
    requireArg(ps.space == Space::Sphere, "capDiscrepancyDirect: sphere point set required");
    requireArg(ps.unitWeights(), "capDiscrepancyDirect: unit weights required");
    requireArg(samples >= 2 && cells >= 2, "capDiscrepancyDirect: bad sampling parameters");
    const int n = ps.size();
    const int dim = ps.d + 1;
    const double dtau = 2.0 / cells;
    // sigma-measure of the cap {x.y >= tau} at the cell midpoints
    Eigen::VectorXd capFrac(cells);
    for (int c = 0; c < cells; ++c)
        capFrac[c] = capHatCoefficient(ctx, -1.0 + (c + 0.5) * dtau, 0);
    std::vector<int> counts(cells + 1);
    Eigen::VectorXd x(dim);
    double acc = 0.0, acc2 = 0.0;
    constexpr long kBatch = 8192;
    for (long done = 0; done < samples;) {
        const long batch = std::min(kBatch, samples - done);
        Rng rng(deriveSeed(seed, static_cast<std::uint64_t>(done / kBatch)));
        for (long s = 0; s < batch; ++s) {
            double norm2 = 0.0;
            do {
                for (int j = 0; j < dim; ++j) x[j] = rng.gaussian();
                norm2 = x.squaredNorm();
            } while (norm2 < 1e-24);
            x /= std::sqrt(norm2);
            std::fill(counts.begin(), counts.end(), 0);
            for (int i = 0; i < n; ++i) {
                const double u = ps.points.row(i).dot(x);
                int q = static_cast<int>(std::floor((u + 1.0) / dtau + 0.5));
                q = std::clamp(q, 0, cells);
                ++counts[q];
            }
            // suffix counts give the empirical cap fraction at each midpoint
            double est = 0.0;
            int above = 0;
            for (int c = cells - 1; c >= 0; --c) {
                above += counts[c + 1];
                const double diff = static_cast<double>(above) / n - capFrac[c];
                est += diff * diff;
            }
            est *= dtau;
            acc += est;
            acc2 += est * est;
        }
        done += batch;
    }
    DirectCapDiscrepancy out;
    out.d2 = acc / samples;
    const double var = std::max(0.0, acc2 / samples - out.d2 * out.d2);
    out.standardError = std::sqrt(var / samples);
    return out;
}

// J_d = int int |x-y| dsigma dsigma = 2^d Gamma((d+1)/2)^2 / (sqrt(pi) Gamma(d+1/2)).
inline double meanDistanceIntegral(int d) {
    requireArg(d >= 1, "meanDistanceIntegral: d >= 1 required");
    return std::exp(d * std::log(2.0) + 2.0 * std::lgamma(0.5 * (d + 1)) -
                    0.5 * std::log(M_PI) - std::lgamma(d + 0.5));
}

inline double meanPairwiseDistance(const WeightedPointSet& ps) {
    requireArg(ps.space == Space::Sphere, "meanPairwiseDistance: sphere point set required");
    const int n = ps.size();
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            sum += 2.0 * (ps.points.row(i) - ps.points.row(j)).norm();
    return sum / (static_cast<double>(n) * n);
}

struct StolarskyCalibration {
    int d = 0;
    double cd = 0.0;
    double standardError = 0.0;
    double spread = 0.0;  // (max-min)/mean of the per-set ratios
    Eigen::VectorXd ratios;
};

// Estimates the Stolarsky constant c_d as the ratio
// (J_d - mean pairwise distance) / D^2_direct over independent random sets.
// The identity makes the ratio set-independent; a spread beyond 5% means the
// direct evaluation is off and is reported as a calibration error.
inline StolarskyCalibration calibrateStolarskyConstant(const GegenbauerContext& ctx, int nSets,
                                                       int pointsPerSet, long samples,
                                                       std::uint64_t seed) {
    requireArg(ctx.dim() == 2 || ctx.dim() == 3, "calibrateStolarskyConstant: d in {2,3}");
    requireArg(nSets >= 2, "calibrateStolarskyConstant: need at least two sets");
    StolarskyCalibration cal;
    cal.d = ctx.dim();
    cal.ratios.resize(nSets);
    const double jd = meanDistanceIntegral(ctx.dim());
    for (int i = 0; i < nSets; ++i) {
        GeneratorSpec spec;
        spec.kind = GeneratorSpec::Kind::UniformRandom;
        spec.space = Space::Sphere;
        spec.d = ctx.dim();
        spec.n = pointsPerSet;
        spec.seed = deriveSeed(seed, 1000 + i);
        const WeightedPointSet ps = generate(spec);
        const DirectCapDiscrepancy direct =
            capDiscrepancyDirect(ctx, ps, samples, deriveSeed(seed, 2000 + i));
        cal.ratios[i] = (jd - meanPairwiseDistance(ps)) / direct.d2;
    }
    cal.cd = cal.ratios.mean();
    cal.spread = (cal.ratios.maxCoeff() - cal.ratios.minCoeff()) / cal.cd;
    cal.standardError = std::sqrt((cal.ratios.array() - cal.cd).square().sum() /
                                  (nSets - 1.0) / nSets);
    if (cal.spread > 0.05)
        throw std::runtime_error("calibrateStolarskyConstant: ratio spread exceeds 5%");
    return cal;
}

// D^2_{L^2,cap} through the Stolarsky principle with a calibrated c_d.
inline double capDiscrepancyStolarsky(const WeightedPointSet& ps, double cd) {
    requireArg(ps.space == Space::Sphere, "capDiscrepancyStolarsky: sphere point set required");
    if (!(std::isfinite(cd) && cd > 0.0))
        throw std::runtime_error("capDiscrepancyStolarsky: c_d has not been calibrated");
    return (meanDistanceIntegral(ps.d) - meanPairwiseDistance(ps)) / cd;
}

struct GStolReport {
    double lhsD2 = 0.0;           // spectral D^2 truncated at L
    double discreteEnergy = 0.0;  // (1/N^2) sum F(z_i.z_j)
    double integralEnergy = 0.0;  // I_F(sigma)
    double rhs = 0.0;             // discreteEnergy - integralEnergy
    double difference = 0.0;      // lhsD2 - rhs
    double truncationBound = 0.0;
};

// Both sides of the generalized Stolarsky identity, evaluated independently:
// the left through the spectral discrepancy, the right through pairwise sums
// of the synthesized potential F and its quadrature energy integral.
inline GStolReport generalizedStolarskyCheck(const GegenbauerContext& ctx,
                                             const ProfileFunction& f, const WeightedPointSet& ps,
                                             int L) {
    requireArg(ps.space == Space::Sphere, "generalizedStolarskyCheck: sphere point set required");
    const SpectralDiscrepancy lhs = discrepancyL2Spectral(ctx, f, ps, L);
    const HatCoefficients hat = hatTransform(ctx, f, L);
    const Eigen::VectorXd fCoeff = hat.values.array().square();  // Fhat = fhat^2

    // F(t) = sum_n Fhat(n) E_n(t); energy over pairs
    const int n = ps.size();
    Eigen::VectorXd sweep(L + 1);
    auto evalF = [&](double t) {
        evalESweep(ctx, L, t, sweep);
        return fCoeff.dot(sweep);
    };
    double energy = n * evalF(1.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            energy += 2.0 * evalF(std::clamp(ps.points.row(i).dot(ps.points.row(j)), -1.0, 1.0));
    GStolReport rep;
    rep.lhsD2 = lhs.d2;
    rep.truncationBound = lhs.truncationBound;
    rep.discreteEnergy = energy / (static_cast<double>(n) * n);
    // I_F(sigma) by quadrature of F against the weight; equals Fhat(0)
    const auto& q = ctx.quadrature();
    double integral = 0.0;
    for (int i = 0; i < q.nodes.size(); ++i) integral += q.weights[i] * evalF(q.nodes[i]);
    rep.integralEnergy = integral / ctx.weightMass();
    rep.rhs = rep.discreteEnergy - rep.integralEnergy;
    rep.difference = rep.lhsD2 - rep.rhs;
    return rep;
}

// sum_{i,j} log(2 + N^{1/d} |z_i-z_j|) / (1 + N^{1/d} |z_i-z_j|)^{d+1}.
inline double corollaryRHS(const WeightedPointSet& ps, int d) {
    requireArg(ps.space == Space::Sphere, "corollaryRHS: sphere point set required");
    const int n = ps.size();
    const double scale = std::pow(static_cast<double>(n), 1.0 / d);
    double sum = n * std::log(2.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double r = (ps.points.row(i) - ps.points.row(j)).norm();
            sum += 2.0 * std::log(2.0 + scale * r) / std::pow(1.0 + scale * r, d + 1.0);
        }
    return sum;
}

struct BeckReport {
    double lhs = 0.0;    // D^2_{L^2,cap}
    double rhs = 0.0;    // N^{-2-1/d} * corollaryRHS
    double ratio = 0.0;  // lhs / rhs, the fitted constant
};

inline BeckReport beckRefinedCheck(const WeightedPointSet& ps, int d, double cd) {
    BeckReport rep;
    rep.lhs = capDiscrepancyStolarsky(ps, cd);
    rep.rhs = std::pow(static_cast<double>(ps.size()), -2.0 - 1.0 / d) * corollaryRHS(ps, d);
    rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;
    return rep;
}

struct EnergyReport {
    double discreteEnergy = 0.0;
    double integralEnergy = 0.0;
    double difference = 0.0;
    double clusteringRHS = 0.0;
    double fittedConstant = 0.0;
    double minHat = 0.0;  // min_{1<=n<=C' N^{1/d}} Fhat(n,lambda)
    int degreeCap = 0;
};

// Energy gap of a positive definite potential F against the corollary's
// clustering right-hand side. Positive definiteness (Fhat(n) >= 0 for n >= 1)
// is verified numerically up to L.
inline EnergyReport energyGapReport(const GegenbauerContext& ctx, const ProfileFunction& F,
                                    const WeightedPointSet& ps, int L, double cPrime = 4.0) {
    requireArg(ps.space == Space::Sphere, "energyGapReport: sphere point set required");
    requireArg(ps.unitWeights(), "energyGapReport: unit weights required");
    const HatCoefficients hat = hatTransform(ctx, F, L);
    const double scale = std::max(1.0, hat.values.cwiseAbs().maxCoeff());
    for (int nn = 1; nn <= L; ++nn)
        if (hat.values[nn] < -1e-9 * scale)
            throw std::runtime_error("energyGapReport: F is not positive definite (negative hat)");
    const int n = ps.size();
    EnergyReport rep;
    double energy = n * F.evaluate(1.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            energy += 2.0 * F.evaluate(std::clamp(ps.points.row(i).dot(ps.points.row(j)), -1.0, 1.0));
    rep.discreteEnergy = energy / (static_cast<double>(n) * n);
    const auto& q = ctx.quadrature();
    double integral = 0.0;
    for (int i = 0; i < q.nodes.size(); ++i) integral += q.weights[i] * F.evaluate(q.nodes[i]);
    rep.integralEnergy = integral / ctx.weightMass();
    rep.difference = rep.discreteEnergy - rep.integralEnergy;
    rep.degreeCap = std::max(
        1, std::min(L, static_cast<int>(cPrime * std::pow(static_cast<double>(n), 1.0 / ps.d))));
    rep.minHat = hat.values.segment(1, rep.degreeCap).minCoeff();
    rep.clusteringRHS = rep.minHat / n * corollaryRHS(ps, ps.d);
    rep.fittedConstant = rep.clusteringRHS > 0.0 ? rep.difference / rep.clusteringRHS : 0.0;
    return rep;
}

}  // namespace montlab

#endif
