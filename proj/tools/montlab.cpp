// montlab: uniformity analysis of weighted point sets on S^d and T^d.
//
// Subcommands:
//   analyze   run named checks on one configuration, emit a JSON/CSV report
//   sweep     run checks over a swept parameter, emit CSV rows
//   calibrate estimate the Stolarsky constant c_d and the heat tail constant
//   gen       write a point-set file
//
// Exit codes: 0 all hard checks pass, 1 a hard check failed (the failing
// record is printed), 2 usage error.

#include <CLI11.hpp>

#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "montlab/discrepancy.hpp"
#include "montlab/report.hpp"
#include "montlab/torus.hpp"

using namespace montlab;

namespace {

struct Options {
    std::string target;  // sphere | torus
    std::string gen = "random";
    std::string file;
    int n = 100;
    int d = 2;
    int degree = 32;
    int x = 8;
    double tau = 0.0;
    double eps = 1e-3;
    bool weighted = false;
    std::uint64_t seed = 1;
    long samples = 200000;
    std::string checks = "";
    std::string out;
    std::string format = "json";
    std::string config;
    // calibration state (config file or flags can pin these)
    double cd = 0.0;
    double cdSe = 0.0;
    double tailC = 1.0;
    double cPrime = 4.0;
    int maxDegree = 0;  // 0 = derive from degree
};

int threadBudget() {
    const char* env = std::getenv("MONTLAB_THREADS");
    if (!env) return 1;
    const int v = std::atoi(env);
    return v >= 1 ? v : 1;
}

std::map<std::string, double> parseConfigFile(const std::string& path) {
    std::map<std::string, double> kv;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = line.substr(0, eq);
        kv[key] = std::strtod(line.c_str() + eq + 1, nullptr);
    }
    return kv;
}

void applyConfig(Options& opt) {
    if (opt.config.empty()) return;
    const auto kv = parseConfigFile(opt.config);
    const std::string cdKey = "cd_" + std::to_string(opt.d);
    if (auto it = kv.find(cdKey); it != kv.end() && opt.cd == 0.0) opt.cd = it->second;
    if (auto it = kv.find(cdKey + "_se"); it != kv.end() && opt.cdSe == 0.0) opt.cdSe = it->second;
    if (auto it = kv.find("tail_c"); it != kv.end()) opt.tailC = it->second;
    if (auto it = kv.find("cprime"); it != kv.end()) opt.cPrime = it->second;
    if (auto it = kv.find("max_degree"); it != kv.end() && opt.maxDegree == 0)
        opt.maxDegree = static_cast<int>(it->second);
}

GeneratorSpec::Kind parseKind(const std::string& name, bool torus) {
    using Kind = GeneratorSpec::Kind;
    if (name == "random") return torus ? Kind::TorusRandom : Kind::UniformRandom;
    if (name == "fibonacci") return Kind::FibonacciSphere;
    if (name == "spiral") return Kind::GeneralizedSpiral;
    if (name == "grid") return Kind::TorusGrid;
    if (name == "cluster-fibonacci" || name == "cluster-random") return Kind::ClusterPairs;
    throw CLI::ValidationError("--gen", "unknown generator '" + name + "'");
}

WeightedPointSet buildPointSet(const Options& opt) {
    if (!opt.file.empty()) return loadPointSet(opt.file);
    GeneratorSpec spec;
    const bool torus = opt.target == "torus";
    spec.kind = parseKind(opt.gen, torus);
    spec.space = torus ? Space::Torus : Space::Sphere;
    spec.d = opt.d;
    spec.n = opt.n;
    spec.seed = opt.seed;
    spec.pairSeparation = opt.eps;
    spec.baseKind = opt.gen == "cluster-random" ? GeneratorSpec::Kind::UniformRandom
                                                : GeneratorSpec::Kind::FibonacciSphere;
    WeightedPointSet ps = generate(spec);
    if (opt.weighted) {
        Rng rng(deriveSeed(opt.seed, 0xabcdef));
        for (int i = 0; i < ps.size(); ++i) ps.weights[i] = rng.uniform01();
    }
    return ps;
}

std::vector<std::string> splitChecks(const std::string& csv) {
    std::vector<std::string> names;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) names.push_back(tok);
    return names;
}

// --- sphere checks ---------------------------------------------------------

void checkMontgomerySphere(const GegenbauerContext& ctx, const WeightedPointSet& ps,
                           const Options& opt, std::vector<CheckRecord>& out) {
    Stopwatch sw;
    const int L = opt.degree;
    const double n2 = static_cast<double>(ps.size()) * ps.size();
    const double lhs = theorem2LHS(ctx, ps, L);
    const double g1 = kernelLowerBoundSum(ctx, ps, L, 1);
    const double g2 = kernelLowerBoundSum(ctx, ps, L, 2);
    auto r1 = CheckRecord::ge("montgomery.chain-lhs-ge-g1", lhs, g1, 1e-6 * n2);
    auto r2 = CheckRecord::ge("montgomery.chain-g1-ge-g2", g1, g2, 1e-6 * n2);
    auto r3 = CheckRecord::ge("montgomery.g2-nonnegative", g2, 0.0, 1e-6 * n2);
    const double rhs = theorem2RHS(ps, L, ps.d);
    auto r4 = CheckRecord::ge("montgomery.fitted-constant-positive", lhs / rhs, 0.0, 0.0);
    r4.fittedConstant = lhs / rhs;
    r4.hard = false;
    const double diag = static_cast<double>(ps.size()) * std::pow(static_cast<double>(L), ps.d);
    auto r5 = CheckRecord::ge("montgomery.diagonal-bound-fitted", lhs / diag, 0.0, 0.0);
    r5.fittedConstant = lhs / diag;
    r5.hard = false;
    r1.runtimeMs = sw.ms();
    out.insert(out.end(), {r1, r2, r3, r4, r5});
}

void checkStolarsky(const GegenbauerContext& ctx, const WeightedPointSet& ps, Options& opt,
                    std::vector<CheckRecord>& out) {
    Stopwatch sw;
    if (opt.cd <= 0.0) {
        const auto cal = calibrateStolarskyConstant(ctx, 3, 60, opt.samples,
                                                    deriveSeed(opt.seed, 0x5701));
        opt.cd = cal.cd;
        opt.cdSe = cal.standardError;
    }
    const auto direct = capDiscrepancyDirect(ctx, ps, opt.samples, deriveSeed(opt.seed, 0x5702));
    const double viaStol = capDiscrepancyStolarsky(ps, opt.cd);
    const double tol = 3.0 * (direct.standardError + opt.cdSe / opt.cd * viaStol);
    auto r = CheckRecord::absDiffLe("stolarsky.identity", direct.d2, viaStol, tol);
    r.fittedConstant = opt.cd;
    r.runtimeMs = sw.ms();
    out.push_back(r);
    const double j = meanDistanceIntegral(ps.d);
    auto r2 = CheckRecord::ge("stolarsky.distance-deficit-positive",
                              j - meanPairwiseDistance(ps), 0.0, 0.0);
    out.push_back(r2);
}

void checkGStol(const GegenbauerContext& ctx, const WeightedPointSet& ps, const Options& opt,
                std::vector<CheckRecord>& out) {
    Stopwatch sw;
    const int L = std::min(opt.degree, ctx.maxDegree());
    const auto cap = generalizedStolarskyCheck(ctx, ProfileFunction::capIndicator(opt.tau), ps, L);
    auto r1 = CheckRecord::absDiffLe("gstol.cap", cap.lhsD2, cap.rhs,
                                     std::max(cap.truncationBound, 1e-8));
    r1.runtimeMs = sw.ms();
    Eigen::VectorXd coeff = Eigen::VectorXd::Zero(4);
    coeff[3] = 1.0;
    const auto f = ProfileFunction::gegenbauerSeries(coeff, ctx.lambda());
    const auto mode = generalizedStolarskyCheck(ctx, f, ps, std::min(8, L));
    auto r2 = CheckRecord::absDiffLe("gstol.single-mode", mode.lhsD2, mode.rhs, 1e-8);
    out.insert(out.end(), {r1, r2});
}

void checkBeckRefined(const GegenbauerContext& ctx, const WeightedPointSet& ps, Options& opt,
                      std::vector<CheckRecord>& out) {
    Stopwatch sw;
    if (opt.cd <= 0.0) {
        const auto cal = calibrateStolarskyConstant(ctx, 3, 60, opt.samples,
                                                    deriveSeed(opt.seed, 0x5701));
        opt.cd = cal.cd;
        opt.cdSe = cal.standardError;
    }
    const auto r = beckRefinedCheck(ps, ps.d, opt.cd);
    auto rec = CheckRecord::ge("beck-refined.ratio-positive", r.ratio, 0.0, 0.0);
    rec.lhs = r.lhs;
    rec.rhs = r.rhs;
    rec.pass = r.lhs > 0.0 && r.ratio > 0.0;
    rec.fittedConstant = r.ratio;
    rec.runtimeMs = sw.ms();
    out.push_back(rec);
}

void checkEnergy(const GegenbauerContext& ctx, const WeightedPointSet& ps, const Options& opt,
                 std::vector<CheckRecord>& out) {
    Stopwatch sw;
    const auto F = ProfileFunction::numeric(
        [](double t) { return -std::sqrt(std::max(0.0, 2.0 - 2.0 * t)); });
    const auto rep = energyGapReport(ctx, F, ps, std::min(opt.degree, ctx.maxDegree()),
                                     opt.cPrime);
    auto r1 = CheckRecord::ge("energy.gap-nonnegative", rep.difference, 0.0,
                              1e-8 * std::abs(rep.discreteEnergy));
    r1.runtimeMs = sw.ms();
    auto r2 = CheckRecord::ge("energy.fitted-constant-positive", rep.fittedConstant, 0.0, 0.0);
    r2.fittedConstant = rep.fittedConstant;
    r2.hard = false;
    out.insert(out.end(), {r1, r2});
}

void checkKogbetliantz(const GegenbauerContext& ctx, const Options& opt,
                       std::vector<CheckRecord>& out) {
    Stopwatch sw;
    const int L = std::min(opt.degree, ctx.maxDegree());
    const KernelSeries s = cesaroSeries(ctx.dim(), static_cast<double>(ctx.dim()), L);
    double minVal = 1e300;
    for (int i = 0; i < 2000; ++i)
        minVal = std::min(minVal, evalKernelSeries(ctx, s, -1.0 + 2.0 * i / 1999.0));
    auto r = CheckRecord::ge("kogbetliantz.min-on-grid", minVal, 0.0, 1e-9);
    r.runtimeMs = sw.ms();
    out.push_back(r);
}

void checkCapDecay(const GegenbauerContext& ctx, std::vector<CheckRecord>& out) {
    Stopwatch sw;
    const double ref = capHatL2Average(ctx, 2) * 8.0;
    double lo = 1e300, hi = 0.0;
    for (int n : {2, 4, 8, 16, 32, 64}) {
        const double r = capHatL2Average(ctx, n) * std::pow(static_cast<double>(n), ctx.dim() + 1);
        lo = std::min(lo, r / ref);
        hi = std::max(hi, r / ref);
    }
    auto r1 = CheckRecord::ge("cap-decay.band-lower", lo, 1.0 / 8.0, 0.0);
    auto r2 = CheckRecord::le("cap-decay.band-upper", hi, 8.0, 0.0);
    r1.runtimeMs = sw.ms();
    out.insert(out.end(), {r1, r2});
}

// --- torus checks ----------------------------------------------------------

void checkMontgomeryLemma(const WeightedPointSet& ps, const Options& opt,
                          std::vector<CheckRecord>& out) {
    Stopwatch sw;
    const auto r = montgomeryLemmaCheck(ps, opt.x);
    auto rec = CheckRecord::ge("montgomery-lemma", r.lhs, r.rhs, 1e-9 * r.lhs);
    rec.pass = r.holds;
    rec.runtimeMs = sw.ms();
    out.push_back(rec);
}

void checkTheorem1(const WeightedPointSet& ps, const Options& opt,
                   std::vector<CheckRecord>& out) {
    Stopwatch sw;
    const auto r = theorem1Functional(ps, opt.x);
    auto rec = CheckRecord::ge("theorem1.ratio-positive", r.ratio, 0.0, 0.0);
    rec.lhs = r.lhs;
    rec.rhs = r.rhsCore;
    rec.pass = r.lhs > 0.0 && r.ratio > 0.0;
    rec.fittedConstant = r.ratio;
    rec.runtimeMs = sw.ms();
    out.push_back(rec);
}

void checkHeatChain(const WeightedPointSet& ps, const Options& opt,
                    std::vector<CheckRecord>& out) {
    Stopwatch sw;
    const auto r = heatComparisonDiagnostic(ps, opt.x, opt.tailC);
    auto r1 = CheckRecord::ge("heat-chain.margin", r.spectralLHS,
                              r.heatQuadForm - r.tailTermBound, 0.0);
    r1.runtimeMs = sw.ms();
    auto r2 = CheckRecord::absDiffLe("heat-chain.poisson-identity", r.heatQuadForm,
                                     r.dampedSum + r.tailSum,
                                     1e-9 * std::max(1.0, r.heatQuadForm));
    auto r3 = CheckRecord::ge("heat-chain.quadform-ge-diagonal", r.heatQuadForm, r.diagQuadForm,
                              1e-12 * std::abs(r.heatQuadForm));
    auto r4 = CheckRecord::ge("heat-chain.ratio-positive", r.ratio, 0.0, 0.0);
    r4.fittedConstant = r.ratio;
    r4.hard = false;
    out.insert(out.end(), {r1, r2, r3, r4});
}

void checkClustering(const WeightedPointSet& ps, const Options& opt,
                     std::vector<CheckRecord>& out) {
    Stopwatch sw;
    const double lhs = ballWindowTotal(ps, opt.x);
    const double rhs = clusteringDiagnosticTorus(ps, opt.x);
    auto r = CheckRecord::ge("clustering.fitted-constant-positive", lhs / rhs, 0.0, 0.0);
    r.lhs = lhs;
    r.rhs = rhs;
    r.pass = lhs > 0.0 && rhs > 0.0;
    r.fittedConstant = lhs / rhs;
    r.runtimeMs = sw.ms();
    out.push_back(r);
}

void checkPoisson(const Options& opt, std::vector<CheckRecord>& out) {
    Stopwatch sw;
    Rng rng(deriveSeed(opt.seed, 0x901));
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
        worst = std::max(worst,
                         std::abs(theta - heatKernelSpectral(a, b, t)) / std::max(1.0, theta));
    }
    auto r = CheckRecord::le("poisson.max-relative-gap", worst, 1e-12, 0.0);
    r.runtimeMs = sw.ms();
    out.push_back(r);
}

// --- drivers ----------------------------------------------------------------

std::vector<std::string> defaultChecks(const std::string& target) {
    if (target == "sphere") return {"montgomery", "kogbetliantz"};
    return {"montgomery-lemma", "poisson"};
}

AnalysisReport runAnalysis(Options opt) {
    applyConfig(opt);
    AnalysisReport rep;
    rep.target = opt.target;
    rep.generator = opt.file.empty() ? opt.gen : "file:" + opt.file;
    rep.n = opt.n;
    rep.d = opt.d;
    rep.degree = opt.degree;
    rep.x = opt.x;
    rep.environment.seed = opt.seed;
    rep.environment.cPrime = opt.cPrime;
    rep.environment.tailC = opt.tailC;
    rep.environment.threads = threadBudget();

    auto names = splitChecks(opt.checks);
    if (names.empty()) names = defaultChecks(opt.target);

    if (opt.target == "sphere") {
        const int L = opt.maxDegree > 0
                          ? opt.maxDegree
                          : std::min(256, std::max({64, 2 * opt.degree}));
        GegenbauerContext ctx(opt.d, L);
        rep.environment.quadratureNodes = static_cast<int>(ctx.quadrature().nodes.size());
        rep.environment.maxDegree = ctx.maxDegree();
        const WeightedPointSet ps = buildPointSet(opt);
        rep.n = ps.size();
        for (const auto& name : names) {
            if (name == "montgomery")
                checkMontgomerySphere(ctx, ps, opt, rep.checks);
            else if (name == "stolarsky")
                checkStolarsky(ctx, ps, opt, rep.checks);
            else if (name == "gstol")
                checkGStol(ctx, ps, opt, rep.checks);
            else if (name == "beck-refined")
                checkBeckRefined(ctx, ps, opt, rep.checks);
            else if (name == "energy")
                checkEnergy(ctx, ps, opt, rep.checks);
            else if (name == "kogbetliantz")
                checkKogbetliantz(ctx, opt, rep.checks);
            else if (name == "cap-decay")
                checkCapDecay(ctx, rep.checks);
            else
                throw CLI::ValidationError("--checks", "unknown sphere check '" + name + "'");
        }
    } else {
        const WeightedPointSet ps = buildPointSet(opt);
        rep.n = ps.size();
        for (const auto& name : names) {
            if (name == "montgomery-lemma")
                checkMontgomeryLemma(ps, opt, rep.checks);
            else if (name == "theorem1")
                checkTheorem1(ps, opt, rep.checks);
            else if (name == "heat-chain")
                checkHeatChain(ps, opt, rep.checks);
            else if (name == "clustering")
                checkClustering(ps, opt, rep.checks);
            else if (name == "poisson")
                checkPoisson(opt, rep.checks);
            else
                throw CLI::ValidationError("--checks", "unknown torus check '" + name + "'");
        }
    }
    rep.environment.cd = opt.cd;
    rep.environment.cdSe = opt.cdSe;
    return rep;
}

void writeOutput(const std::string& text, const std::string& outPath) {
    if (outPath.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream out(outPath);
        if (!out) throw std::runtime_error("cannot open output file " + outPath);
        out << text << "\n";
    }
}

// One CSV row per configuration; per-check scalars become columns
// <check>.lhs, <check>.rhs, <check>.tolerance, <check>.fitted, <check>.pass.
std::string csvHeader(const std::string& param, const std::vector<CheckRecord>& sample) {
    std::string head = "# montlab " + std::string(kVersion) +
                       " sweep; one row per configuration, 17 significant digits\n";
    head += param + ",set,seed";
    for (const auto& c : sample)
        for (const char* s : {".lhs", ".rhs", ".tolerance", ".fitted", ".pass"})
            head += "," + c.name + s;
    return head;
}

std::string csvRow(double value, int set, std::uint64_t seed,
                   const std::vector<CheckRecord>& checks) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%.17g,%d,%llu", value, set,
                  static_cast<unsigned long long>(seed));
    std::string row = buf;
    for (const auto& c : checks) {
        std::snprintf(buf, sizeof buf, ",%.17g,%.17g,%.17g,%.17g,%d", finiteOrZero(c.lhs),
                      finiteOrZero(c.rhs), finiteOrZero(c.tolerance),
                      finiteOrZero(c.fittedConstant), c.pass ? 1 : 0);
        row += buf;
    }
    return row;
}

int emitReport(const AnalysisReport& rep, const Options& opt) {
    if (opt.format == "csv") {
        const std::string param = opt.target == "sphere" ? "L" : "X";
        std::string text = csvHeader(param, rep.checks);
        text += "\n" + csvRow(opt.target == "sphere" ? rep.degree : rep.x, 0, opt.seed,
                              rep.checks);
        writeOutput(text, opt.out);
    } else {
        writeOutput(toJson(rep).dump(2), opt.out);
    }
    for (const auto& c : rep.checks)
        if (!c.pass && !c.hard)
            std::cerr << "warning: soft check '" << c.name << "' did not pass (lhs=" << c.lhs
                      << ", rhs=" << c.rhs << ")\n";
    if (!rep.allHardPass()) {
        for (const auto& c : rep.checks)
            if (c.hard && !c.pass)
                std::cerr << "FAILED: " << c.name << " relation=" << c.relation
                          << " lhs=" << c.lhs << " rhs=" << c.rhs << " tol=" << c.tolerance
                          << "\n";
        return 1;
    }
    return 0;
}

int cmdAnalyze(Options& opt) { return emitReport(runAnalysis(opt), opt); }

int cmdSweep(Options& opt, const std::string& param, std::vector<double>& values, int sets) {
    if (values.empty()) throw CLI::ValidationError("--values", "empty sweep range");
    if (sets < 1) throw CLI::ValidationError("--sets", "need at least one set");
    struct Job {
        double value;
        int set;
        Options opt;
    };
    std::vector<Job> jobs;
    for (double v : values)
        for (int s = 0; s < sets; ++s) {
            Options o = opt;
            if (param == "L" || param == "degree")
                o.degree = static_cast<int>(v);
            else if (param == "X" || param == "x")
                o.x = static_cast<int>(v);
            else if (param == "N" || param == "n")
                o.n = static_cast<int>(v);
            else
                throw CLI::ValidationError("--param", "unknown sweep parameter '" + param + "'");
            o.seed = deriveSeed(opt.seed, static_cast<std::uint64_t>(jobs.size()));
            jobs.push_back({v, s, std::move(o)});
        }
    std::vector<std::string> rows(jobs.size());
    std::vector<std::vector<CheckRecord>> results(jobs.size());
    std::vector<int> status(jobs.size(), 0);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) break;
            try {
                const AnalysisReport rep = runAnalysis(jobs[i].opt);
                results[i] = rep.checks;
                rows[i] = csvRow(jobs[i].value, jobs[i].set, jobs[i].opt.seed, rep.checks);
                status[i] = rep.allHardPass() ? 0 : 1;
            } catch (const std::exception& e) {
                rows[i] = "# error: " + std::string(e.what());
                status[i] = 1;
            }
        }
    };
    const int budget = std::min<int>(threadBudget(), static_cast<int>(jobs.size()));
    if (budget <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < budget; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    std::size_t sample = 0;
    while (sample < results.size() && results[sample].empty()) ++sample;
    std::string text =
        csvHeader(param, sample < results.size() ? results[sample] : std::vector<CheckRecord>{});
    for (const auto& r : rows) text += "\n" + r;
    writeOutput(text, opt.out);
    for (int s : status)
        if (s != 0) return 1;
    return 0;
}

int cmdCalibrate(Options& opt, int sets) {
    applyConfig(opt);
    GegenbauerContext ctx(opt.d, 16);
    const auto cal = calibrateStolarskyConstant(ctx, sets, opt.n, opt.samples, opt.seed);
    const double tailC = calibrateTailConstant();
    if (opt.format == "json") {
        nlohmann::json j = {{"toolVersion", kVersion},
                            {"d", opt.d},
                            {"cd", cal.cd},
                            {"cdStandardError", cal.standardError},
                            {"cdSpread", cal.spread},
                            {"tailC", tailC},
                            {"A_d1", (1.0 / tailC) * (1.0 - 1.0 / 1.0) + 1.0},
                            {"A_d2", (1.0 / tailC) * (1.0 - 1.0 / 2.0) + 1.0},
                            {"prng", kRngName},
                            {"samples", opt.samples},
                            {"sets", sets},
                            {"seed", opt.seed}};
        writeOutput(j.dump(2), opt.out);
    } else {
        char buf[256];
        std::string text;
        std::snprintf(buf, sizeof buf, "cd_%d=%.17g\n", opt.d, cal.cd);
        text += buf;
        std::snprintf(buf, sizeof buf, "cd_%d_se=%.17g\n", opt.d, cal.standardError);
        text += buf;
        std::snprintf(buf, sizeof buf, "tail_c=%.17g\n", tailC);
        text += buf;
        std::snprintf(buf, sizeof buf, "cprime=%.17g", opt.cPrime);
        text += buf;
        writeOutput(text, opt.out);
    }
    return 0;
}

int cmdGen(Options& opt) {
    if (opt.out.empty()) throw CLI::ValidationError("--out", "gen requires an output path");
    const WeightedPointSet ps = buildPointSet(opt);
    savePointSet(ps, opt.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"montlab: Montgomery-type uniformity analysis on S^d and T^d"};
    app.require_subcommand(1);
    Options opt;

    auto addCommon = [&](CLI::App* cmd, bool wantsTarget) {
        if (wantsTarget)
            cmd->add_option("target", opt.target, "sphere or torus")
                ->required()
                ->check(CLI::IsMember({"sphere", "torus"}));
        cmd->add_option("--gen", opt.gen,
                        "generator: random|fibonacci|spiral|grid|cluster-fibonacci|cluster-random");
        cmd->add_option("--file", opt.file, "load point set from file");
        cmd->add_option("--n", opt.n, "number of points");
        cmd->add_option("--d", opt.d, "dimension of S^d / T^d");
        cmd->add_option("--degree,-L", opt.degree, "max harmonic degree L");
        cmd->add_option("--x,-X", opt.x, "frequency window X");
        cmd->add_option("--tau", opt.tau, "cap parameter tau");
        cmd->add_option("--eps", opt.eps, "cluster pair separation");
        cmd->add_flag("--weighted", opt.weighted, "use random nonnegative weights");
        cmd->add_option("--seed", opt.seed, "root seed");
        cmd->add_option("--samples", opt.samples, "Monte Carlo samples");
        cmd->add_option("--checks", opt.checks, "comma-separated check names");
        cmd->add_option("--out", opt.out, "output path (default stdout)");
        cmd->add_option("--format", opt.format, "json|csv|config")
            ->check(CLI::IsMember({"json", "csv", "config"}));
        cmd->add_option("--config", opt.config, "key=value config file");
        cmd->add_option("--cd", opt.cd, "pin the Stolarsky constant c_d");
        cmd->add_option("--cprime", opt.cPrime, "corollary degree-cap constant C'");
        cmd->add_option("--tail-c", opt.tailC, "heat tail-bound constant c");
        cmd->add_option("--max-degree", opt.maxDegree, "quadrature/context max degree");
    };

    auto* analyze = app.add_subcommand("analyze", "run checks on one configuration");
    addCommon(analyze, true);

    auto* sweep = app.add_subcommand("sweep", "sweep a parameter, emit CSV");
    std::string param = "L";
    std::vector<double> values;
    int sets = 1;
    addCommon(sweep, true);
    sweep->add_option("--param", param, "swept parameter: L|X|N");
    sweep->add_option("--values", values, "swept values")->delimiter(',');
    sweep->add_option("--sets", sets, "independent sets per value");

    auto* calibrate = app.add_subcommand("calibrate", "estimate c_d and the tail constant");
    int calSets = 5;
    addCommon(calibrate, false);
    calibrate->add_option("--sets", calSets, "calibration sets");

    auto* gen = app.add_subcommand("gen", "write a point-set file");
    addCommon(gen, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (analyze->parsed()) return cmdAnalyze(opt);
        if (sweep->parsed()) return cmdSweep(opt, param, values, sets);
        if (calibrate->parsed()) {
            opt.n = opt.n == 100 ? 100 : opt.n;
            return cmdCalibrate(opt, calSets);
        }
        if (gen->parsed()) return cmdGen(opt);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
