#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "montlab/discrepancy.hpp"
#include "montlab/pointset.hpp"

using namespace montlab;

namespace {

GeneratorSpec sphereSpec(GeneratorSpec::Kind kind, int n, std::uint64_t seed = 0) {
    GeneratorSpec s;
    s.kind = kind;
    s.space = Space::Sphere;
    s.d = 2;
    s.n = n;
    s.seed = seed;
    return s;
}

double minPairwiseChordal(const WeightedPointSet& ps) {
    double best = 1e300;
    for (int i = 0; i < ps.size(); ++i)
        for (int j = i + 1; j < ps.size(); ++j)
            best = std::min(best, (ps.points.row(i) - ps.points.row(j)).norm());
    return best;
}

}  // namespace

TEST_CASE("generators are deterministic and valid") {
    const auto a = generate(sphereSpec(GeneratorSpec::Kind::UniformRandom, 10, 7));
    const auto b = generate(sphereSpec(GeneratorSpec::Kind::UniformRandom, 10, 7));
    CHECK(a.points == b.points);  // bitwise
    for (int i = 0; i < a.size(); ++i) CHECK(std::abs(a.points.row(i).norm() - 1.0) < 1e-12);
    const auto c = generate(sphereSpec(GeneratorSpec::Kind::UniformRandom, 10, 8));
    CHECK(a.points != c.points);
}

TEST_CASE("torus grid is the expected lattice") {
    GeneratorSpec s;
    s.kind = GeneratorSpec::Kind::TorusGrid;
    s.space = Space::Torus;
    s.d = 2;
    s.n = 16;
    const auto ps = generate(s);
    CHECK(ps.size() == 16);
    // every coordinate is a multiple of 1/4 and every pair appears once
    Eigen::MatrixXd seen = Eigen::MatrixXd::Zero(4, 4);
    for (int i = 0; i < 16; ++i) {
        const double x = ps.points(i, 0) * 4, y = ps.points(i, 1) * 4;
        CHECK(x == std::floor(x));
        CHECK(y == std::floor(y));
        seen(static_cast<int>(x), static_cast<int>(y)) += 1;
    }
    CHECK(seen.minCoeff() == 1.0);
    s.n = 15;
    CHECK_THROWS_AS(generate(s), std::invalid_argument);
}

TEST_CASE("unsupported generator/space combinations are rejected") {
    GeneratorSpec s;
    s.kind = GeneratorSpec::Kind::FibonacciSphere;
    s.space = Space::Sphere;
    s.d = 3;
    s.n = 10;
    CHECK_THROWS_AS(generate(s), std::invalid_argument);
    s.kind = GeneratorSpec::Kind::TorusGrid;
    CHECK_THROWS_AS(generate(s), std::invalid_argument);
}

TEST_CASE("uniform sphere sampling concentrates") {
    for (int n : {100, 400}) {
        const auto ps = generate(sphereSpec(GeneratorSpec::Kind::UniformRandom, n, 42));
        const double meanNorm = (ps.points.colwise().sum() / n).norm();
        CHECK(meanNorm <= 4.0 / std::sqrt(static_cast<double>(n)));
    }
}

TEST_CASE("Fibonacci separation scales like 1/sqrt(N)") {
    double prev = 0.0;
    for (int n : {100, 400, 1600}) {
        const auto ps = generate(sphereSpec(GeneratorSpec::Kind::FibonacciSphere, n));
        const double c = minPairwiseChordal(ps) * std::sqrt(static_cast<double>(n));
        CHECK(c > 0.5);  // fitted: measured ~3; generous floor
        if (prev > 0.0) {
            CHECK(c / prev < 1.5);
            CHECK(c / prev > 0.67);
        }
        prev = c;
    }
}

TEST_CASE("generalized spiral covers the sphere") {
    const auto ps = generate(sphereSpec(GeneratorSpec::Kind::GeneralizedSpiral, 200));
    CHECK(ps.size() == 200);
    for (int i = 0; i < ps.size(); ++i) CHECK(std::abs(ps.points.row(i).norm() - 1.0) < 1e-12);
    CHECK(minPairwiseChordal(ps) > 0.05);
}

TEST_CASE("cluster pairs sit at the requested separation") {
    GeneratorSpec s = sphereSpec(GeneratorSpec::Kind::ClusterPairs, 100);
    s.baseKind = GeneratorSpec::Kind::FibonacciSphere;
    s.pairSeparation = 1e-3;
    const auto ps = generate(s);
    CHECK(ps.size() == 100);
    for (int i = 0; i < 50; ++i) {
        const double sep = (ps.points.row(2 * i) - ps.points.row(2 * i + 1)).norm();
        CHECK(sep == doctest::Approx(1e-3).epsilon(1e-9));
        CHECK(std::abs(ps.points.row(2 * i).norm() - 1.0) < 1e-12);
    }
    SUBCASE("clustering doubles the corollary mass") {
        const auto base = generate(sphereSpec(GeneratorSpec::Kind::FibonacciSphere, 100));
        const double factor = corollaryRHS(ps, 2) / corollaryRHS(base, 2);
        CHECK(factor > 1.7);
        CHECK(factor < 2.3);
    }
    s.n = 99;
    CHECK_THROWS_AS(generate(s), std::invalid_argument);
}

TEST_CASE("point set file round trip") {
    const std::string path = "roundtrip_test_points.txt";
    auto ps = generate(sphereSpec(GeneratorSpec::Kind::UniformRandom, 5, 77));
    ps.weights << 1.0, 0.25, 3.5, 0.0, 2.0;
    savePointSet(ps, path);
    std::vector<std::string> warnings;
    const auto back = loadPointSet(path, &warnings);
    CHECK(back.points == ps.points);  // bitwise via 17 significant digits
    CHECK(back.weights == ps.weights);
    CHECK(back.space == Space::Sphere);
    CHECK(back.d == 2);
    CHECK(warnings.empty());
    std::remove(path.c_str());
}

TEST_CASE("loader rejects malformed files with line numbers") {
    const std::string path = "malformed_test_points.txt";
    SUBCASE("negative weight") {
        std::ofstream(path) << "# space=sphere d=2 weighted=1\n1 0 0 -1\n";
        try {
            loadPointSet(path);
            CHECK(false);
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()).find(":2:") != std::string::npos);
            CHECK(std::string(e.what()).find("negative weight") != std::string::npos);
        }
    }
    SUBCASE("wrong column count") {
        std::ofstream(path) << "# space=torus d=2 weighted=0\n0.5 0.5 0.5\n";
        CHECK_THROWS_AS(loadPointSet(path), std::runtime_error);
    }
    SUBCASE("non-numeric token") {
        std::ofstream(path) << "# space=sphere d=2 weighted=0\n1 zero 0\n";
        CHECK_THROWS_AS(loadPointSet(path), std::runtime_error);
    }
    SUBCASE("norm slightly off gets renormalized with a warning") {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%.17g 0 0\n", 1.0 + 1e-10);
        std::ofstream(path) << "# space=sphere d=2 weighted=0\n" << buf;
        std::vector<std::string> warnings;
        const auto ps = loadPointSet(path, &warnings);
        CHECK(warnings.size() == 1);
        CHECK(std::abs(ps.points.row(0).norm() - 1.0) < 1e-15);
    }
    SUBCASE("norm badly off is rejected") {
        std::ofstream(path) << "# space=sphere d=2 weighted=0\n1.001 0 0\n";
        CHECK_THROWS_AS(loadPointSet(path), std::runtime_error);
    }
    std::remove(path.c_str());
}
