#ifndef MONTLAB_POINTSET_HPP
#define MONTLAB_POINTSET_HPP

// Weighted point sets on S^d (unit vectors in R^{d+1}) and T^d (coordinates
// in [0,1)^d), deterministic generators for the test families, and text I/O.

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "montlab/common.hpp"

namespace montlab {

enum class Space { Sphere, Torus };

struct WeightedPointSet {
    Space space = Space::Sphere;
    int d = 2;                // S^d or T^d
    Eigen::MatrixXd points;   // N x (d+1) for spheres, N x d for tori
    Eigen::VectorXd weights;  // nonnegative, default all 1

    int size() const { return static_cast<int>(points.rows()); }
    bool unitWeights() const { return (weights.array() == 1.0).all(); }
};

inline WeightedPointSet makeSpherePointSet(Eigen::MatrixXd points,
                                           Eigen::VectorXd weights = Eigen::VectorXd()) {
    requireArg(points.rows() >= 1, "point set: N >= 1 required");
    const int d = static_cast<int>(points.cols()) - 1;
    requireArg(d >= 1, "sphere point set: points must have d+1 >= 2 coordinates");
    for (int i = 0; i < points.rows(); ++i)
        requireArg(std::abs(points.row(i).norm() - 1.0) < 1e-12,
                   "sphere point set: point " + std::to_string(i) + " is not a unit vector");
    if (weights.size() == 0) weights = Eigen::VectorXd::Ones(points.rows());
    requireArg(weights.size() == points.rows(), "point set: weight count mismatch");
    requireArg((weights.array() >= 0.0).all(), "point set: weights must be nonnegative");
    return WeightedPointSet{Space::Sphere, d, std::move(points), std::move(weights)};
}

inline WeightedPointSet makeTorusPointSet(Eigen::MatrixXd points,
                                          Eigen::VectorXd weights = Eigen::VectorXd()) {
    requireArg(points.rows() >= 1, "point set: N >= 1 required");
    const int d = static_cast<int>(points.cols());
    requireArg(d >= 1, "torus point set: points must have d >= 1 coordinates");
    requireArg((points.array() >= 0.0).all() && (points.array() < 1.0).all(),
               "torus point set: coordinates must lie in [0,1)");
    if (weights.size() == 0) weights = Eigen::VectorXd::Ones(points.rows());
    requireArg(weights.size() == points.rows(), "point set: weight count mismatch");
    requireArg((weights.array() >= 0.0).all(), "point set: weights must be nonnegative");
    return WeightedPointSet{Space::Torus, d, std::move(points), std::move(weights)};
}

inline Eigen::MatrixXd gramMatrix(const WeightedPointSet& ps) {
    requireArg(ps.space == Space::Sphere, "gramMatrix: sphere point set required");
    Eigen::MatrixXd g = ps.points * ps.points.transpose();
    g = g.cwiseMax(-1.0).cwiseMin(1.0);
    g.diagonal().setOnes();
    return g;
}

struct GeneratorSpec {
    enum class Kind {
        UniformRandom,
        FibonacciSphere,
        GeneralizedSpiral,
        ClusterPairs,
        TorusGrid,
        TorusRandom,
        FromFile
    };
    Kind kind = Kind::UniformRandom;
    Space space = Space::Sphere;
    int d = 2;
    int n = 1;
    std::uint64_t seed = 0;
    Kind baseKind = Kind::FibonacciSphere;  // for ClusterPairs
    double pairSeparation = 1e-3;           // for ClusterPairs (chordal)
    std::string path;                       // for FromFile
};

inline WeightedPointSet generate(const GeneratorSpec& spec);
inline WeightedPointSet loadPointSet(const std::string& path,
                                     std::vector<std::string>* warnings = nullptr);
inline void savePointSet(const WeightedPointSet& ps, const std::string& path);

namespace detail {

inline Eigen::MatrixXd sphereUniform(int n, int d, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::MatrixXd pts(n, d + 1);
    for (int i = 0; i < n; ++i) {
        double norm2 = 0.0;
        do {
            for (int j = 0; j <= d; ++j) pts(i, j) = rng.gaussian();
            norm2 = pts.row(i).squaredNorm();
        } while (norm2 < 1e-24);
        pts.row(i) /= std::sqrt(norm2);
    }
    return pts;
}

// Golden-angle z-stratified construction on S^2.
inline Eigen::MatrixXd fibonacciSphere(int n) {
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    Eigen::MatrixXd pts(n, 3);
    for (int i = 0; i < n; ++i) {
        const double z = 1.0 - (2.0 * i + 1.0) / n;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * i;
        pts(i, 0) = r * std::cos(phi);
        pts(i, 1) = r * std::sin(phi);
        pts(i, 2) = z;
    }
    return pts;
}

// Rakhmanov-Saff-Zhou spiral on S^2.
inline Eigen::MatrixXd generalizedSpiral(int n) {
    Eigen::MatrixXd pts(n, 3);
    double phi = 0.0;
    for (int k = 0; k < n; ++k) {
        const double h = n == 1 ? 0.0 : -1.0 + 2.0 * k / (n - 1.0);
        const double sin2 = std::max(0.0, 1.0 - h * h);
        if (k == 0 || k == n - 1)
            phi = 0.0;
        else
            phi += 3.6 / std::sqrt(n * sin2);
        pts(k, 0) = std::sqrt(sin2) * std::cos(phi);
        pts(k, 1) = std::sqrt(sin2) * std::sin(phi);
        pts(k, 2) = h;
    }
    return pts;
}

}  // namespace detail

inline WeightedPointSet generate(const GeneratorSpec& spec) {
    using Kind = GeneratorSpec::Kind;
    requireArg(spec.n >= 1, "generate: N >= 1 required");
    switch (spec.kind) {
        case Kind::UniformRandom:
        case Kind::TorusRandom: {
            if (spec.kind == Kind::UniformRandom && spec.space == Space::Sphere)
                return makeSpherePointSet(detail::sphereUniform(spec.n, spec.d, spec.seed));
            requireArg(spec.space == Space::Torus, "generate: TorusRandom requires torus space");
            Rng rng(spec.seed);
            Eigen::MatrixXd pts(spec.n, spec.d);
            for (int i = 0; i < spec.n; ++i)
                for (int j = 0; j < spec.d; ++j) pts(i, j) = rng.uniform01();
            return makeTorusPointSet(std::move(pts));
        }
        case Kind::FibonacciSphere:
            requireArg(spec.space == Space::Sphere && spec.d == 2,
                       "generate: FibonacciSphere requires S^2");
            return makeSpherePointSet(detail::fibonacciSphere(spec.n));
        case Kind::GeneralizedSpiral:
            requireArg(spec.space == Space::Sphere && spec.d == 2,
                       "generate: GeneralizedSpiral requires S^2");
            return makeSpherePointSet(detail::generalizedSpiral(spec.n));
        case Kind::ClusterPairs: {
            requireArg(spec.space == Space::Sphere, "generate: ClusterPairs requires a sphere");
            requireArg(spec.n % 2 == 0, "generate: ClusterPairs requires even N");
            requireArg(spec.pairSeparation > 0.0 && spec.pairSeparation < 2.0,
                       "generate: pair separation must lie in (0,2)");
            GeneratorSpec base = spec;
            base.kind = spec.baseKind;
            base.n = spec.n / 2;
            const WeightedPointSet basePs = generate(base);
            const int dim = spec.d + 1;
            Eigen::MatrixXd pts(spec.n, dim);
            // Each base point p splits into cos(a) p +- sin(a) u with
            // sin(a) = eps/2, so the pair is at chordal distance exactly eps.
            const double sina = spec.pairSeparation / 2.0;
            const double cosa = std::sqrt(1.0 - sina * sina);
            for (int i = 0; i < basePs.size(); ++i) {
                const Eigen::VectorXd p = basePs.points.row(i);
                int axis = 0;
                for (int j = 1; j < dim; ++j)
                    if (std::abs(p[j]) < std::abs(p[axis])) axis = j;
                Eigen::VectorXd u = Eigen::VectorXd::Zero(dim);
                u[axis] = 1.0;
                u -= u.dot(p) * p;
                u /= u.norm();
                pts.row(2 * i) = (cosa * p + sina * u).transpose();
                pts.row(2 * i + 1) = (cosa * p - sina * u).transpose();
                pts.row(2 * i) /= pts.row(2 * i).norm();
                pts.row(2 * i + 1) /= pts.row(2 * i + 1).norm();
            }
            return makeSpherePointSet(std::move(pts));
        }
        case Kind::TorusGrid: {
            requireArg(spec.space == Space::Torus, "generate: TorusGrid requires a torus");
            const int m = static_cast<int>(std::llround(std::pow(spec.n, 1.0 / spec.d)));
            int check = 1;
            for (int j = 0; j < spec.d; ++j) check *= m;
            requireArg(check == spec.n, "generate: TorusGrid N must be a d-th power");
            Eigen::MatrixXd pts(spec.n, spec.d);
            for (int i = 0; i < spec.n; ++i) {
                int rest = i;
                for (int j = 0; j < spec.d; ++j) {
                    pts(i, j) = static_cast<double>(rest % m) / m;
                    rest /= m;
                }
            }
            return makeTorusPointSet(std::move(pts));
        }
        case Kind::FromFile:
            return loadPointSet(spec.path);
    }
    throw std::invalid_argument("generate: unsupported generator kind");
}

inline void savePointSet(const WeightedPointSet& ps, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("savePointSet: cannot open " + path);
    const bool weighted = !ps.unitWeights();
    out << "# space=" << (ps.space == Space::Sphere ? "sphere" : "torus") << " d=" << ps.d
        << " weighted=" << (weighted ? 1 : 0) << "\n";
    char buf[32];
    for (int i = 0; i < ps.size(); ++i) {
        for (int j = 0; j < ps.points.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", ps.points(i, j));
            out << (j ? " " : "") << buf;
        }
        if (weighted) {
            std::snprintf(buf, sizeof buf, "%.17g", ps.weights[i]);
            out << ' ' << buf;
        }
        out << '\n';
    }
}

inline WeightedPointSet loadPointSet(const std::string& path, std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("loadPointSet: cannot open " + path);
    std::string line;
    int lineNo = 0;
    Space space = Space::Sphere;
    int d = -1;
    bool weighted = false;
    bool headerSeen = false;
    std::vector<Eigen::VectorXd> rows;
    std::vector<double> weights;
    auto parseError = [&](const std::string& what) {
        return std::runtime_error("loadPointSet: " + path + ":" + std::to_string(lineNo) + ": " +
                                  what);
    };
    while (std::getline(in, line)) {
        ++lineNo;
        if (!headerSeen) {
            int dVal = 0, wVal = 0;
            char spaceBuf[16] = {0};
            if (std::sscanf(line.c_str(), "# space=%15[a-z] d=%d weighted=%d", spaceBuf, &dVal,
                            &wVal) == 3) {
                const std::string s = spaceBuf;
                if (s == "sphere")
                    space = Space::Sphere;
                else if (s == "torus")
                    space = Space::Torus;
                else
                    throw parseError("unknown space '" + s + "'");
                if (dVal < 1) throw parseError("invalid dimension");
                if (wVal != 0 && wVal != 1) throw parseError("invalid weighted flag");
                d = dVal;
                weighted = wVal == 1;
                headerSeen = true;
                continue;
            }
            throw parseError("expected header '# space=... d=... weighted=...'");
        }
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::vector<double> vals;
        double v;
        while (ss >> v) vals.push_back(v);
        if (!ss.eof()) throw parseError("malformed row");
        if (vals.empty()) continue;
        const int coords = space == Space::Sphere ? d + 1 : d;
        const std::size_t expect = coords + (weighted ? 1 : 0);
        if (vals.size() != expect)
            throw parseError("expected " + std::to_string(expect) + " values, got " +
                             std::to_string(vals.size()));
        Eigen::VectorXd row = Eigen::Map<Eigen::VectorXd>(vals.data(), coords);
        double w = weighted ? vals.back() : 1.0;
        if (w < 0.0) throw parseError("negative weight");
        if (space == Space::Sphere) {
            const double err = std::abs(row.norm() - 1.0);
            if (err > 1e-9) throw parseError("sphere vector is off the unit sphere by more than 1e-9");
            if (err > 1e-12) {
                row /= row.norm();
                if (warnings)
                    warnings->push_back("line " + std::to_string(lineNo) +
                                        ": renormalized sphere vector (|norm-1| > 1e-12)");
            }
        } else {
            for (int j = 0; j < coords; ++j)
                if (row[j] < 0.0 || row[j] >= 1.0) throw parseError("torus coordinate outside [0,1)");
        }
        rows.push_back(std::move(row));
        weights.push_back(w);
    }
    if (!headerSeen) throw std::runtime_error("loadPointSet: " + path + ": empty file");
    if (rows.empty()) throw std::runtime_error("loadPointSet: " + path + ": no points");
    Eigen::MatrixXd pts(rows.size(), rows[0].size());
    Eigen::VectorXd ws(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        pts.row(i) = rows[i].transpose();
        ws[i] = weights[i];
    }
    return space == Space::Sphere ? makeSpherePointSet(std::move(pts), std::move(ws))
                                  : makeTorusPointSet(std::move(pts), std::move(ws));
}

}  // namespace montlab

#endif
