// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.
//
// Each criterion pins its tolerances and runtime budget in code. Families,
// grids and seeds are fixed so the suite is reproducible run to run.

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "montlab/discrepancy.hpp"
#include "montlab/torus.hpp"

using namespace montlab;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

double nowSeconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

WeightedPointSet randomSphere(int n, int d, std::uint64_t seed) {
    GeneratorSpec s;
    s.kind = GeneratorSpec::Kind::UniformRandom;
    s.space = Space::Sphere;
    s.d = d;
    s.n = n;
    s.seed = seed;
    return generate(s);
}

WeightedPointSet randomTorus(int n, int d, std::uint64_t seed) {
    GeneratorSpec s;
    s.kind = GeneratorSpec::Kind::TorusRandom;
    s.space = Space::Torus;
    s.d = d;
    s.n = n;
    s.seed = seed;
    return generate(s);
}

WeightedPointSet antipodalDouble(const WeightedPointSet& ps) {
    Eigen::MatrixXd pts(2 * ps.size(), ps.points.cols());
    pts.topRows(ps.size()) = ps.points;
    pts.bottomRows(ps.size()) = -ps.points;
    return makeSpherePointSet(std::move(pts));
}

// 30 sets per dimension: 25 random sizes plus 5 structured configurations
// (low-discrepancy, clustered, antipodally symmetric, degenerate).
std::vector<WeightedPointSet> buildFamily(int d) {
    std::vector<WeightedPointSet> family;
    for (int i = 0; i < 25; ++i) family.push_back(randomSphere(20 + 4 * i, d, 4000 + 31 * i + d));
    if (d == 2) {
        GeneratorSpec fib;
        fib.kind = GeneratorSpec::Kind::FibonacciSphere;
        fib.space = Space::Sphere;
        fib.d = 2;
        fib.n = 100;
        family.push_back(generate(fib));
        GeneratorSpec spiral = fib;
        spiral.kind = GeneratorSpec::Kind::GeneralizedSpiral;
        spiral.n = 80;
        family.push_back(generate(spiral));
        GeneratorSpec cl = fib;
        cl.kind = GeneratorSpec::Kind::ClusterPairs;
        cl.baseKind = GeneratorSpec::Kind::FibonacciSphere;
        cl.pairSeparation = 1e-3;
        family.push_back(generate(cl));
        GeneratorSpec cl2 = cl;
        cl2.baseKind = GeneratorSpec::Kind::UniformRandom;
        cl2.n = 60;
        cl2.seed = 99;
        cl2.pairSeparation = 1e-4;
        family.push_back(generate(cl2));
        family.push_back(antipodalDouble(randomSphere(40, 2, 777)));
    } else {
        GeneratorSpec cl;
        cl.kind = GeneratorSpec::Kind::ClusterPairs;
        cl.baseKind = GeneratorSpec::Kind::UniformRandom;
        cl.space = Space::Sphere;
        cl.d = d;
        cl.n = 60;
        cl.seed = 5;
        cl.pairSeparation = 1e-3;
        family.push_back(generate(cl));
        cl.seed = 6;
        cl.pairSeparation = 1e-5;
        family.push_back(generate(cl));
        family.push_back(antipodalDouble(randomSphere(40, d, 778)));
        // cross-polytope vertices {+-e_i}
        Eigen::MatrixXd cp = Eigen::MatrixXd::Zero(2 * (d + 1), d + 1);
        for (int i = 0; i <= d; ++i) {
            cp(2 * i, i) = 1.0;
            cp(2 * i + 1, i) = -1.0;
        }
        family.push_back(makeSpherePointSet(std::move(cp)));
        family.push_back(randomSphere(150, d, 779));
    }
    return family;
}

// Shared by criteria 3 and 5: Gram degree sums to L = 64 per family member.
struct FamilyData {
    int d;
    std::vector<WeightedPointSet> sets;
    std::vector<Eigen::VectorXd> gramSums;  // degree sums up to 64
};

FamilyData& familyData(int d) {
    static FamilyData cache[2];
    FamilyData& fd = cache[d - 2];
    if (fd.sets.empty()) {
        fd.d = d;
        fd.sets = buildFamily(d);
        GegenbauerContext ctx(d, 64);
        for (const auto& ps : fd.sets) fd.gramSums.push_back(montgomerySumGram(ctx, ps, 64));
    }
    return fd;
}

// ---------------------------------------------------------------------------

Outcome criterion1() {  // addition-formula identity, runtime < 10 s
    const double t0 = nowSeconds();
    GegenbauerContext ctx(2, 8);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const int n = 2 + (i * 7) % 29;
        const auto ps = randomSphere(n, 2, 10000 + i);
        const auto gram = montgomerySumGram(ctx, ps, 8);
        const auto explicitSums = explicitHarmonicsSum(ps, 8);
        for (int deg = 0; deg <= 8; ++deg)
            worst = std::max(worst, std::abs(gram[deg] - explicitSums[deg]) / (1e-8 * n * n));
        if (worst > 1.0) return {false, fmt("set %d exceeded tolerance", i)};
    }
    const double dt = nowSeconds() - t0;
    return {dt < 10.0, fmt("worst residual %.2e of tolerance, %.2f s", worst, dt)};
}

Outcome criterion2() {  // Kogbetliantz nonnegativity, runtime < 5 s
    const double t0 = nowSeconds();
    double minVal = 1e300;
    for (int d : {2, 3}) {
        GegenbauerContext ctx(d, 64);
        for (int L = 0; L <= 64; ++L) {
            const KernelSeries s = cesaroSeries(d, static_cast<double>(d), L);
            for (int i = 0; i < 2000; ++i)
                minVal = std::min(minVal, evalKernelSeries(ctx, s, -1.0 + 2.0 * i / 1999.0));
        }
    }
    const double dt = nowSeconds() - t0;
    return {minVal >= -1e-9 && dt < 5.0, fmt("grid min %.2e, %.2f s", minVal, dt)};
}

Outcome criterion3() {  // theorem 2 proof chain, zero violations
    int violations = 0;
    for (int d : {2, 3}) {
        const FamilyData& fd = familyData(d);
        GegenbauerContext ctx(d, 64);
        for (std::size_t i = 0; i < fd.sets.size(); ++i) {
            const double n2 = static_cast<double>(fd.sets[i].size()) * fd.sets[i].size();
            for (int L : {8, 16, 32, 64}) {
                const double lhs = fd.gramSums[i].head(L + 1).sum();
                const double g1 = kernelLowerBoundSum(ctx, fd.sets[i], L, 1);
                const double g2 = kernelLowerBoundSum(ctx, fd.sets[i], L, 2);
                const double slack = 1e-6 * n2;
                if (!(lhs >= g1 - slack && g1 >= g2 - slack && g2 >= -slack)) ++violations;
            }
        }
    }
    return {violations == 0, fmt("%d violations over 480 chain checks", violations)};
}

Outcome criterion4() {  // lemma 1-2 envelope constants, bands 2 (d=2) / 3 (d=3)
    bool pass = true;
    std::string detail;
    for (int d : {2, 3}) {
        GegenbauerContext ctx(d, 64);
        const double band = d == 2 ? 2.0 : 3.0;
        for (int level : {1, 2}) {
            double lo = 1e300, hi = 0.0;
            for (int n : {8, 16, 32, 64}) {
                const KernelSeries s = level == 1 ? gSeries1(d, n) : gSeries2(d, n);
                double c = 1e300;
                for (int i = 0; i < 400; ++i) {
                    const double theta = 2.0 / n + (M_PI - 2.0 / n) * i / 399.0;
                    const double env = level == 1 ? envelopeLowerBoundNoLog(d, n, theta, 1.0)
                                                  : envelopeLowerBound(d, n, theta, 1.0);
                    c = std::min(c, evalKernelSeries(ctx, s, std::cos(theta)) / env);
                }
                if (c <= 0.0) pass = false;
                lo = std::min(lo, c);
                hi = std::max(hi, c);
            }
            const bool stable = hi / lo < band;
            pass = pass && stable;
            detail += fmt("%sd=%d %s band %.2f%s", detail.empty() ? "" : ", ", d,
                          level == 1 ? "c_fit" : "C_fit", hi / lo, stable ? "" : " (>limit)");
        }
    }
    return {pass, detail};
}

Outcome criterion5() {  // theorem 2 fitted constant stability + diagonal bound
    bool pass = true;
    std::string detail;
    for (int d : {2, 3}) {
        const FamilyData& fd = familyData(d);
        double perL[3];
        int idx = 0;
        for (int L : {8, 16, 32}) {
            double familyMin = 1e300;
            for (std::size_t i = 0; i < fd.sets.size(); ++i) {
                const double lhs = fd.gramSums[i].head(L + 1).sum();
                familyMin = std::min(familyMin, lhs / theorem2RHS(fd.sets[i], L, d));
            }
            perL[idx++] = familyMin;
            if (familyMin <= 0.0) pass = false;
        }
        const double lo = std::min({perL[0], perL[1], perL[2]});
        const double hi = std::max({perL[0], perL[1], perL[2]});
        if (hi / lo >= 4.0) pass = false;
        // e.bd: diagonal bound with fitted c > 0 whenever L^d >= N
        double diagMin = 1e300;
        for (std::size_t i = 0; i < fd.sets.size(); ++i)
            for (int L : {8, 16, 32, 64}) {
                const double ld = std::pow(static_cast<double>(L), d);
                if (ld < fd.sets[i].size()) continue;
                diagMin = std::min(diagMin,
                                   fd.gramSums[i].head(L + 1).sum() / (fd.sets[i].size() * ld));
            }
        if (diagMin <= 0.0) pass = false;
        detail += fmt("%sd=%d min %.3g..%.3g (band %.2f), e.bd c=%.3g", detail.empty() ? "" : "; ",
                      d, lo, hi, hi / lo, diagMin);
    }
    return {pass, detail};
}

Outcome criterion6() {  // classical Montgomery lemma, 500 configs, < 30 s
    const double t0 = nowSeconds();
    int violations = 0;
    for (int i = 0; i < 500; ++i) {
        const int n = 2 + (i * 13) % 99;
        const int X = 1 + (i * 7) % 20;
        const auto ps = randomTorus(n, 2, 20000 + i);
        if (!montgomeryLemmaCheck(ps, X).holds) ++violations;
    }
    const double dt = nowSeconds() - t0;
    return {violations == 0 && dt < 30.0, fmt("%d violations, %.2f s", violations, dt)};
}

Outcome criterion7() {  // theorem 1 at desk scale + section-3 chain
    const double tailC = calibrateTailConstant();
    bool pass = true;
    std::string detail;
    for (int d : {1, 2}) {
        double minRatio[3] = {1e300, 1e300, 1e300};
        int chainViolations = 0;
        for (int cfg = 0; cfg < 30; ++cfg) {
            auto ps = randomTorus(10 + (cfg * 3) % 50, d, 30000 + 100 * d + cfg);
            Rng rng(deriveSeed(31000 + cfg, d));
            for (int i = 0; i < ps.size(); ++i) ps.weights[i] = rng.uniform01();
            int idx = 0;
            for (int X : {64, 128, 256}) {
                const auto r = theorem1Functional(ps, X);
                minRatio[idx] = std::min(minRatio[idx], r.ratio);
                ++idx;
            }
            const auto hc = heatComparisonDiagnostic(ps, 256, tailC);
            const bool chainOk =
                hc.spectralLHS >= hc.dampedSum * (1.0 - 1e-12) &&
                std::abs(hc.heatQuadForm - (hc.dampedSum + hc.tailSum)) <=
                    1e-9 * std::max(1.0, hc.heatQuadForm) &&
                hc.tailSum <= hc.tailTermBound &&
                hc.heatQuadForm >= hc.diagQuadForm * (1.0 - 1e-12) && hc.margin >= 0.0;
            if (!chainOk) ++chainViolations;
        }
        const double lo = std::min({minRatio[0], minRatio[1], minRatio[2]});
        const double hi = std::max({minRatio[0], minRatio[1], minRatio[2]});
        const bool ok = lo > 0.0 && hi / lo < 4.0 && chainViolations == 0;
        pass = pass && ok;
        detail += fmt("%sd=%d ratio min %.3g..%.3g, %d chain violations",
                      detail.empty() ? "" : "; ", d, lo, hi, chainViolations);
    }
    return {pass, detail};
}

Outcome criterion8() {  // Poisson-summation heat-kernel equivalence
    Rng rng(40404);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int d = 1 + trial % 2;
        Eigen::RowVectorXd a(d), b(d);
        for (int j = 0; j < d; ++j) {
            a[j] = rng.uniform01();
            b[j] = rng.uniform01();
        }
        const double t = std::pow(10.0, -3.0 + 3.0 * rng.uniform01());
        const double theta = heatKernel(a, b, t);
        worst =
            std::max(worst, std::abs(theta - heatKernelSpectral(a, b, t)) / std::max(1.0, theta));
    }
    return {worst <= 1e-12, fmt("max relative gap %.2e", worst)};
}

Outcome criterion9() {  // Stolarsky identity after calibration, < 2 min
    const double t0 = nowSeconds();
    GegenbauerContext ctx(2, 16);
    const double jGamma = meanDistanceIntegral(2);
    if (std::abs(jGamma - 4.0 / 3.0) > 1e-12)
        return {false, "J_2 Gamma closed form is off"};
    // Monte Carlo double integration of J_2
    {
        Rng rng(50505);
        const long samples = 2000000;
        double acc = 0.0, acc2 = 0.0;
        for (long s = 0; s < samples; ++s) {
            Eigen::Vector3d x, y;
            for (int j = 0; j < 3; ++j) x[j] = rng.gaussian();
            for (int j = 0; j < 3; ++j) y[j] = rng.gaussian();
            const double v = (x.normalized() - y.normalized()).norm();
            acc += v;
            acc2 += v * v;
        }
        const double mean = acc / samples;
        const double se = std::sqrt((acc2 / samples - mean * mean) / samples);
        if (std::abs(mean - jGamma) > 3.0 * se)
            return {false, fmt("J_2 Monte Carlo %.6f vs %.6f (3se %.2e)", mean, jGamma, 3 * se)};
    }
    const long samples = 1000000;
    const auto cal = calibrateStolarskyConstant(ctx, 5, 100, samples, 60606);
    double worstSigma = 0.0;
    for (int i = 0; i < 10; ++i) {
        const auto ps = randomSphere(100, 2, 70000 + i);
        const auto direct = capDiscrepancyDirect(ctx, ps, samples, 80000 + i);
        const double lhs = cal.cd * direct.d2;
        const double rhs = jGamma - meanPairwiseDistance(ps);
        const double se = cal.cd * direct.standardError + cal.standardError * direct.d2;
        worstSigma = std::max(worstSigma, std::abs(lhs - rhs) / se);
        if (std::abs(lhs - rhs) > 3.0 * se)
            return {false, fmt("set %d off by %.2f sigma", i, std::abs(lhs - rhs) / se)};
    }
    const double dt = nowSeconds() - t0;
    return {dt < 120.0,
            fmt("c_2 = %.4f +- %.4f, worst %.2f sigma, %.1f s", cal.cd, cal.standardError,
                worstSigma, dt)};
}

Outcome criterion10() {  // generalized Stolarsky: exact series, bounded caps
    for (int d : {2, 3}) {
        GegenbauerContext ctx(d, 32);
        Rng rng(123 + d);
        Eigen::VectorXd coeff(9);
        for (int i = 0; i < 9; ++i) coeff[i] = 2.0 * rng.uniform01() - 1.0;
        const auto f = ProfileFunction::gegenbauerSeries(coeff, ctx.lambda());
        const auto ps = randomSphere(50, d, 90000 + d);
        const auto rep = generalizedStolarskyCheck(ctx, f, ps, 16);
        if (std::abs(rep.difference) > 1e-8)
            return {false, fmt("series d=%d difference %.2e", d, rep.difference)};
    }
    GegenbauerContext ctx(2, 256);
    const auto ps = randomSphere(100, 2, 91000);
    double worstDiff = 0.0, worstBound = 1e300;
    for (double tau : {-0.5, 0.0, 0.5}) {
        const auto rep =
            generalizedStolarskyCheck(ctx, ProfileFunction::capIndicator(tau), ps, 128);
        if (std::abs(rep.difference) > rep.truncationBound)
            return {false, fmt("cap tau=%.1f outside truncation bound", tau)};
        worstDiff = std::max(worstDiff, std::abs(rep.difference));
        worstBound = std::min(worstBound, rep.truncationBound);
    }
    return {true, fmt("series exact; caps: |diff| <= %.1e, bound >= %.1e", worstDiff, worstBound)};
}

Outcome criterion11() {  // cap-hat decay band on S^2
    GegenbauerContext ctx(2, 70);
    const double ref = capHatL2Average(ctx, 2) * 8.0;
    double lo = 1e300, hi = 0.0;
    for (int n = 2; n <= 64; ++n) {
        const double r = capHatL2Average(ctx, n) * std::pow(static_cast<double>(n), 3);
        lo = std::min(lo, r / ref);
        hi = std::max(hi, r / ref);
    }
    return {lo >= 1.0 / 8.0 && hi <= 8.0, fmt("normalized range [%.3f, %.3f]", lo, hi)};
}

Outcome criterion12() {  // clustering sensitivity of the corollary mass
    GegenbauerContext ctx(2, 16);
    const auto cal = calibrateStolarskyConstant(ctx, 3, 60, 200000, 93000);
    GeneratorSpec fib;
    fib.kind = GeneratorSpec::Kind::FibonacciSphere;
    fib.space = Space::Sphere;
    fib.d = 2;
    fib.n = 100;
    const auto base = generate(fib);
    GeneratorSpec cl = fib;
    cl.kind = GeneratorSpec::Kind::ClusterPairs;
    cl.baseKind = GeneratorSpec::Kind::FibonacciSphere;
    cl.pairSeparation = 1e-3;
    const auto clustered = generate(cl);
    const double factor = corollaryRHS(clustered, 2) / corollaryRHS(base, 2);
    bool ratiosPositive = true;
    for (const auto* ps : {&base, &clustered}) {
        const auto r = beckRefinedCheck(*ps, 2, cal.cd);
        ratiosPositive = ratiosPositive && r.lhs > 0.0 && r.ratio > 0.0;
    }
    for (int i = 0; i < 5; ++i) {
        const auto r = beckRefinedCheck(randomSphere(100, 2, 95000 + i), 2, cal.cd);
        ratiosPositive = ratiosPositive && r.lhs > 0.0 && r.ratio > 0.0;
    }
    const bool inBand = factor > 1.7 && factor < 2.3;
    return {inBand && ratiosPositive,
            fmt("cluster factor %.3f, beck ratios %s", factor,
                ratiosPositive ? "all positive" : "NOT all positive")};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"addition-formula identity (lemma 1-1)", criterion1},
        {"Kogbetliantz nonnegativity", criterion2},
        {"theorem 2 proof chain (eqs 1-2, 1-6)", criterion3},
        {"lemma 1-2 envelope constants (eqs 1-5, 1-3-0)", criterion4},
        {"theorem 2 fitted constant + diagonal bound (eq 1-1, e.bd)", criterion5},
        {"classical Montgomery lemma (e.mont)", criterion6},
        {"theorem 1 at desk scale + heat chain", criterion7},
        {"Poisson-summation heat-kernel equivalence", criterion8},
        {"Stolarsky identity (e.stol) with calibrated c_d", criterion9},
        {"generalized Stolarsky (e.gstol / e.Ff)", criterion10},
        {"cap-hat decay band (n^-d-1)", criterion11},
        {"corollary c.3 clustering sensitivity", criterion12},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const double t0 = nowSeconds();
        Outcome out;
        try {
            out = criteria[i].second();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double dt = nowSeconds() - t0;
        std::printf("[%2zu/12] %s %s (%.2f s) %s\n", i + 1, out.pass ? "PASS" : "FAIL",
                    criteria[i].first.c_str(), dt, out.detail.c_str());
        std::fflush(stdout);
        if (!out.pass) ++failures;
    }
    if (failures > 0) std::printf("%d of 12 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
