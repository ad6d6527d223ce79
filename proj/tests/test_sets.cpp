#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>

#include "cminlab/compact_set.hpp"
#include "cminlab/geometry.hpp"
#include "oracles.hpp"

using namespace cminlab;

TEST_CASE("indexed hausdorff distance equals the naive double loop exactly") {
    std::mt19937_64 rng(12345);
    std::vector<std::shared_ptr<const PhaseSpace>> charts = {
        PhaseSpace::euclidean(2), PhaseSpace::euclidean(4),
        PhaseSpace::cylinder({1.0, 0.0}), PhaseSpace::embedded_sphere(2),
        PhaseSpace::solid_torus()};
    std::uniform_int_distribution<int> size(1, 300);
    // extents around, far below, and far above any internal bucket sizing
    const double extents[] = {2.0, 0.05, 30.0};
    for (int round = 0; round < 12; ++round) {
        for (const auto& space : charts) {
            double extent = extents[round % 3];
            auto a = oracle::random_cloud(space, size(rng), rng, extent);
            auto b = oracle::random_cloud(space, size(rng), rng, extent);
            double fast = hausdorff_distance(a, b);
            double slow = oracle::naive_hausdorff(a, b);
            // same doubles, different search order: equality must be exact
            CHECK(fast == slow);
            CHECK(hausdorff_distance(b, a) == fast);
            CHECK(hausdorff_distance(a, a) == 0.0);
        }
    }
}

TEST_CASE("hausdorff distance rejects empty or mismatched inputs") {
    auto plane = PhaseSpace::euclidean(2);
    CompactSetSample a{plane, {{0.0, 0.0}}, 0, true, false, false};
    CompactSetSample empty{plane, {}, 0, false, false, false};
    CompactSetSample other{PhaseSpace::euclidean(3), {{0.0, 0.0, 0.0}}, 0, true, false, false};
    CHECK_THROWS_AS(hausdorff_distance(a, empty), std::invalid_argument);
    CHECK_THROWS_AS((void)hausdorff_distance(a, other), std::invalid_argument);
}

TEST_CASE("concentric circles sit at hausdorff distance |r1 - r2|") {
    auto plane = PhaseSpace::euclidean(2);
    auto inner = oracle::circle_sample(plane, 1.0, 600);
    auto outer = oracle::circle_sample(plane, 1.4, 600);
    CHECK(hausdorff_distance(inner, outer) == doctest::Approx(0.4).epsilon(1e-3));
    // the min-gap form sees the same value here: nearest approach is radial
    CHECK(set_distance(inner, outer) == doctest::Approx(0.4).epsilon(1e-3));
}

TEST_CASE("min-gap set distance differs from the hausdorff sup") {
    auto plane = PhaseSpace::euclidean(2);
    auto circle = oracle::circle_sample(plane, 1.0, 600);
    CompactSetSample point{plane, {{3.0, 0.0}}, 0, true, false, false};
    CHECK(set_distance(point, circle) == doctest::Approx(2.0).epsilon(1e-4));
    CHECK(point_set_distance({3.0, 0.0}, circle) == doctest::Approx(2.0).epsilon(1e-4));
    // sup side of the circle is 4 away, so the symmetric distance is 4
    CHECK(hausdorff_distance(point, circle) == doctest::Approx(4.0).epsilon(1e-4));
}

TEST_CASE("hopf fibers sit at the analytically known hausdorff distance") {
    auto sphere = PhaseSpace::embedded_sphere(3);
    std::mt19937_64 rng(31);
    auto fiber_through = [&](const Vec& u, int n) {
        CompactSetSample s;
        s.space = sphere;
        for (int k = 0; k < n; ++k) {
            double th = 2 * oracle::kPi * k / n;
            double c = std::cos(th), sn = std::sin(th);
            // e^{i th} (z1, z2) acting on R^4 = C^2
            s.points.push_back({c * u[0] - sn * u[1], sn * u[0] + c * u[1],
                                c * u[2] - sn * u[3], sn * u[2] + c * u[3]});
        }
        return s;
    };
    for (int trial = 0; trial < 10; ++trial) {
        auto u = oracle::random_cloud(sphere, 1, rng).points[0];
        auto v = oracle::random_cloud(sphere, 1, rng).points[0];
        // |<u, v>_C| for u, v in C^2; the fiber distance is sqrt(2 - 2|<u,v>|)
        std::complex<double> inner =
            std::complex<double>(u[0], u[1]) * std::conj(std::complex<double>(v[0], v[1])) +
            std::complex<double>(u[2], u[3]) * std::conj(std::complex<double>(v[2], v[3]));
        double exact = std::sqrt(std::max(0.0, 2.0 - 2.0 * std::abs(inner)));
        double measured = hausdorff_distance(fiber_through(u, 720), fiber_through(v, 720));
        CHECK(measured >= exact - 1e-12);
        CHECK(measured <= exact + 0.01);  // sampling can only overshoot by a chord
    }
}

TEST_CASE("epsilon net covers the input at half spacing and is deterministic") {
    std::mt19937_64 rng(99);
    auto space = PhaseSpace::euclidean(3);
    auto cloud = oracle::random_cloud(space, 700, rng);  // large: indexed thinning path
    const double eps = 0.3;
    auto net = epsilon_net(space, cloud.points, eps);
    CHECK(net.resolution == eps);
    CHECK(net.size() >= 2);
    CHECK(net.size() < cloud.size());
    CHECK(net.points.front() == cloud.points.front());  // greedy keeps the first point

    for (const auto& p : cloud.points)
        CHECK(point_set_distance(p, net) <= 0.5 * eps + 1e-12);
    for (std::size_t i = 0; i < net.size(); ++i)
        for (std::size_t j = i + 1; j < net.size(); ++j)
            CHECK(space->distance(net.points[i], net.points[j]) >= 0.5 * eps * (1 - 1e-12));

    auto again = epsilon_net(space, cloud.points, eps);
    CHECK(again.points == net.points);
}

TEST_CASE("nearest index matches brute force on gridded and scan charts") {
    std::mt19937_64 rng(5);
    for (const auto& space :
         {PhaseSpace::euclidean(2), PhaseSpace::cylinder({1.0, 0.0})}) {
        auto cloud = oracle::random_cloud(space, 400, rng);
        NearestIndex idx(cloud);
        auto queries = oracle::random_cloud(space, 100, rng, 3.0);
        for (const auto& q : queries.points) {
            double brute = std::numeric_limits<double>::infinity();
            for (const auto& p : cloud.points)
                brute = std::min(brute, space->distance(q, p));
            CHECK(idx.distance(q) == brute);
            CHECK(idx.within(q, brute + 1e-9));
            CHECK(!idx.within(q, brute));  // strictly-inside semantics
            // bounded query without active bounds is still exact
            CHECK(idx.nearest(q, -1.0, std::numeric_limits<double>::infinity()) == brute);
            // active bounds may stop early but never invent a smaller distance
            double stopped = idx.nearest(q, brute + 0.5, std::numeric_limits<double>::infinity());
            CHECK(stopped >= brute);
            CHECK(stopped < brute + 0.5 + 1e-12);
        }
    }
}

TEST_CASE("ball containment uses the closed ball") {
    auto plane = PhaseSpace::euclidean(2);
    CompactSetSample center{plane, {{0.0, 0.0}}, 0, true, false, false};
    CompactSetSample on_rim{plane, {{1.0, 0.0}, {0.0, -1.0}}, 0, true, false, false};
    CHECK(contained_in_ball(on_rim, center, 1.0));
    CHECK(!contained_in_ball(on_rim, center, 0.999999));
}
