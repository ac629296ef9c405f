#ifndef MONTLAB_REPORT_HPP
#define MONTLAB_REPORT_HPP

// Machine-readable analysis reports. Every record carries lhs, rhs, the
// comparison relation and tolerance it was judged with, so a report is
// self-verifying: pass can be recomputed from the record alone.

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "montlab/common.hpp"

namespace montlab {

struct CheckRecord {
    std::string name;
    std::string relation;  // "ge" | "le" | "abs_diff_le"
    double lhs = 0.0;
    double rhs = 0.0;
    double tolerance = 0.0;
    double fittedConstant = 0.0;
    bool pass = false;
    bool hard = true;  // identities/inequalities are hard; constant-stability findings are soft
    double runtimeMs = 0.0;

    static CheckRecord ge(std::string name, double lhs, double rhs, double tol) {
        CheckRecord r;
        r.name = std::move(name);
        r.relation = "ge";
        r.lhs = lhs;
        r.rhs = rhs;
        r.tolerance = tol;
        r.pass = lhs >= rhs - tol;
        return r;
    }
    static CheckRecord le(std::string name, double lhs, double rhs, double tol) {
        CheckRecord r;
        r.name = std::move(name);
        r.relation = "le";
        r.lhs = lhs;
        r.rhs = rhs;
        r.tolerance = tol;
        r.pass = lhs <= rhs + tol;
        return r;
    }
    static CheckRecord absDiffLe(std::string name, double lhs, double rhs, double tol) {
        CheckRecord r;
        r.name = std::move(name);
        r.relation = "abs_diff_le";
        r.lhs = lhs;
        r.rhs = rhs;
        r.tolerance = tol;
        r.pass = std::abs(lhs - rhs) <= tol;
        return r;
    }
};

struct ReportEnvironment {
    std::uint64_t seed = 0;
    int quadratureNodes = 0;
    int maxDegree = 0;
    double cd = 0.0;     // Stolarsky constant (0 = not calibrated)
    double cdSe = 0.0;   // its standard error
    double tailC = 1.0;  // heat tail-bound constant
    double cPrime = 4.0;
    int threads = 1;
    std::string prng = kRngName;
};

struct AnalysisReport {
    std::string toolVersion = kVersion;
    std::string target;     // "sphere" | "torus"
    std::string generator;  // generator name or "file:<path>"
    int n = 0;
    int d = 0;
    int degree = 0;
    int x = 0;
    std::vector<CheckRecord> checks;
    ReportEnvironment environment;

    bool allHardPass() const {
        for (const auto& c : checks)
            if (c.hard && !c.pass) return false;
        return true;
    }
};

inline double finiteOrZero(double v) { return std::isfinite(v) ? v : 0.0; }

inline nlohmann::json toJson(const CheckRecord& r) {
    return {{"name", r.name},
            {"relation", r.relation},
            {"lhs", finiteOrZero(r.lhs)},
            {"rhs", finiteOrZero(r.rhs)},
            {"tolerance", finiteOrZero(r.tolerance)},
            {"fittedConstant", finiteOrZero(r.fittedConstant)},
            {"pass", r.pass},
            {"hard", r.hard},
            {"runtimeMs", finiteOrZero(r.runtimeMs)}};
}

inline nlohmann::json toJson(const AnalysisReport& rep) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : rep.checks) checks.push_back(toJson(c));
    return {{"toolVersion", rep.toolVersion},
            {"spec",
             {{"target", rep.target},
              {"generator", rep.generator},
              {"n", rep.n},
              {"d", rep.d},
              {"degree", rep.degree},
              {"x", rep.x}}},
            {"checks", checks},
            {"environment",
             {{"seed", rep.environment.seed},
              {"quadratureNodes", rep.environment.quadratureNodes},
              {"maxDegree", rep.environment.maxDegree},
              {"cd", finiteOrZero(rep.environment.cd)},
              {"cdStandardError", finiteOrZero(rep.environment.cdSe)},
              {"tailC", finiteOrZero(rep.environment.tailC)},
              {"cPrime", finiteOrZero(rep.environment.cPrime)},
              {"threads", rep.environment.threads},
              {"prng", rep.environment.prng}}}};
}

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace montlab

#endif
