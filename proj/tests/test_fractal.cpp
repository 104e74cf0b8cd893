#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "esnf/fractal.hpp"
#include "esnf/rng.hpp"
#include "oracles.hpp"

#include <cmath>
#include <limits>

using namespace esnf;

namespace {

StateCloud single_point(double x, double y)
{
    StateCloud cloud;
    cloud.dim = 2;
    cloud.coords = {x, y};
    cloud.labels = {1};
    return cloud;
}

StateCloud diagonal_cloud(std::size_t n)
{
    StateCloud cloud;
    cloud.dim = 2;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = -1.0 + 2.0 * (static_cast<double>(i) + 0.5) /
                                    static_cast<double>(n);
        cloud.coords.push_back(t);
        cloud.coords.push_back(t);
        cloud.labels.push_back(1);
    }
    return cloud;
}

}  // namespace

TEST_CASE("box_count: single point occupies one box at any resolution")
{
    const StateCloud cloud = single_point(0.3, -0.7);
    for (int eps : {1, 2, 7, 100, 1000})
        CHECK(box_count(cloud, BoxGrid::cube(eps, 2)) == 1);
}

TEST_CASE("box_count: diagonal cell centers occupy exactly eps boxes")
{
    for (int eps : {1, 3, 10, 57}) {
        StateCloud cloud;
        cloud.dim = 2;
        for (int k = 0; k < eps; ++k) {
            const double c = -1.0 + (k + 0.5) * 2.0 / eps;
            cloud.coords.push_back(c);
            cloud.coords.push_back(c);
            cloud.labels.push_back(1);
        }
        CHECK(box_count(cloud, BoxGrid::cube(eps, 2)) ==
              static_cast<std::size_t>(eps));
    }
}

TEST_CASE("box_count: matches the brute-force cell-enumeration oracle")
{
    const StateCloud cloud = oracles::uniform_cloud(1000, 2, 123);
    CHECK(box_count(cloud, BoxGrid::cube(5, 2)) ==
          oracles::brute_force_box_count(cloud, 5, -1.0, 1.0));
}

TEST_CASE("box_count: oracle equivalence across dimensions and resolutions")
{
    SplitMix64 rng(555);
    for (int trial = 0; trial < 25; ++trial) {
        const int dim = 1 + static_cast<int>(rng.next() % 3);
        const int eps = 1 + static_cast<int>(rng.next() % 20);
        const std::size_t n = 1 + rng.next() % 2000;
        const StateCloud cloud = oracles::uniform_cloud(n, dim, rng.next());
        CHECK(box_count(cloud, BoxGrid::cube(eps, dim)) ==
              oracles::brute_force_box_count(cloud, eps, -1.0, 1.0));
    }
}

TEST_CASE("box_count: empty cloud counts zero")
{
    StateCloud cloud;
    cloud.dim = 2;
    CHECK(box_count(cloud, BoxGrid::cube(10, 2)) == 0);
}

TEST_CASE("box_count: out-of-bounds points are named in the error")
{
    const StateCloud cloud = single_point(1.5, 0.0);
    CHECK_THROWS_WITH_AS((void)box_count(cloud, BoxGrid::cube(4, 2)),
                         doctest::Contains("point 0"), std::invalid_argument);

    const StateCloud far = single_point(1e300, 0.0);
    CHECK_THROWS_AS((void)box_count(far, BoxGrid::cube(4, 2)),
                    std::invalid_argument);
    const StateCloud nan_cloud =
        single_point(std::numeric_limits<double>::quiet_NaN(), 0.0);
    CHECK_THROWS_AS((void)box_count(nan_cloud, BoxGrid::cube(4, 2)),
                    std::invalid_argument);
}

TEST_CASE("box_count: the top edge belongs to the last cell")
{
    const StateCloud cloud = single_point(1.0, 1.0);
    CHECK(box_count(cloud, BoxGrid::cube(4, 2)) == 1);
}

TEST_CASE("box_count: non-decreasing in resolution, bounded by points and cells")
{
    const StateCloud cloud = oracles::uniform_cloud(500, 2, 9);
    std::size_t prev = 0;
    for (int eps : {1, 2, 4, 8, 16, 32, 64}) {
        const std::size_t n = box_count(cloud, BoxGrid::cube(eps, 2));
        CHECK(n >= prev);
        CHECK(n <= cloud.size());
        CHECK(n <= static_cast<std::size_t>(eps) * static_cast<std::size_t>(eps));
        prev = n;
    }
}

TEST_CASE("box_count: affine rescaling of points and bounds together is invariant")
{
    const StateCloud cloud = oracles::uniform_cloud(2000, 2, 31);
    StateCloud scaled = cloud;
    const double scale = 3.5, shift = 11.0;
    for (double& v : scaled.coords) v = v * scale + shift;

    for (int eps : {3, 10, 25}) {
        BoxGrid g = BoxGrid::cube(eps, 2, {-scale + shift, scale + shift});
        CHECK(box_count(cloud, BoxGrid::cube(eps, 2)) == box_count(scaled, g));
    }
}

TEST_CASE("box_count: grid validation")
{
    const StateCloud cloud = single_point(0.0, 0.0);
    BoxGrid g = BoxGrid::cube(0, 2);
    CHECK_THROWS_AS((void)box_count(cloud, g), std::invalid_argument);
    g = BoxGrid::cube(4, 2, {1.0, -1.0});
    CHECK_THROWS_AS((void)box_count(cloud, g), std::invalid_argument);
    g = BoxGrid::cube(4, 3);
    CHECK_THROWS_AS((void)box_count(cloud, g), std::invalid_argument);
}

TEST_CASE("richardson_fit: exact line with slope 2")
{
    // N = eps^2 exactly: {3, 9, 27} -> {9, 81, 729}.
    std::vector<FdSample> samples = {{3, 9}, {9, 81}, {27, 729}};
    const FdEstimate fd = richardson_fit(samples);
    CHECK(fd.slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fd.intercept == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(fd.r_squared == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("richardson_fit: collinear data recovered within 1e-10")
{
    struct Case {
        double slope;
        double intercept;  // ln of the integer prefactor
        std::vector<FdSample> samples;
    };
    // Integer counts that are exactly collinear in log-log space.
    const std::vector<Case> cases = {
        {0.5, std::log(3.0), {{4, 6}, {16, 12}, {64, 24}, {256, 48}}},
        {1.5, std::log(2.0), {{4, 16}, {16, 128}, {64, 1024}, {256, 8192}}},
        {2.0, std::log(5.0), {{3, 45}, {9, 405}, {27, 3645}}},
    };
    for (const auto& c : cases) {
        const FdEstimate fd = richardson_fit(c.samples);
        CHECK(std::abs(fd.slope - c.slope) < 1e-10);
        CHECK(std::abs(fd.intercept - c.intercept) < 1e-10);
        CHECK(fd.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("richardson_fit: input validation")
{
    CHECK_THROWS_AS((void)richardson_fit({{4, 10}}), std::invalid_argument);
    CHECK_THROWS_AS((void)richardson_fit({{4, 10}, {4, 12}}),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)richardson_fit({{4, 10}, {8, 0}}),
                    std::invalid_argument);
}

TEST_CASE("estimate_fd: repeated single point has slope 0")
{
    StateCloud cloud;
    cloud.dim = 2;
    for (int i = 0; i < 100; ++i) {
        cloud.coords.push_back(0.25);
        cloud.coords.push_back(0.25);
        cloud.labels.push_back(1);
    }
    const FdEstimate fd = estimate_fd(cloud, {4, 8, 16, 32});
    CHECK(fd.slope == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("estimate_fd: diagonal line measures dimension 1")
{
    const FdEstimate fd =
        estimate_fd(diagonal_cloud(100000), {10, 20, 40, 80, 160});
    CHECK(fd.slope == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("estimate_fd: filled square measures dimension 2")
{
    const StateCloud cloud = oracles::uniform_cloud(200000, 2, 77);
    const FdEstimate fd = estimate_fd(cloud, {4, 8, 12, 16, 20});
    CHECK(fd.slope == doctest::Approx(2.0).epsilon(0.025));
}

TEST_CASE("estimate_fd: triadic Cantor dust measures log 2 / log 3")
{
    const StateCloud dust = oracles::cantor_dust(12);
    const FdEstimate fd =
        estimate_fd(dust, {3, 9, 27, 81, 243, 729}, {0.0, 1.0});
    CHECK(fd.slope == doctest::Approx(std::log(2.0) / std::log(3.0)).epsilon(0.05));
    CHECK(fd.r_squared > 0.999);
}

TEST_CASE("estimate_fd: single-threaded and parallel counts agree")
{
    const StateCloud cloud = oracles::uniform_cloud(20000, 2, 5);
    const FdEstimate a = estimate_fd(cloud, default_epsilons(), {-1, 1}, 1);
    const FdEstimate b = estimate_fd(cloud, default_epsilons(), {-1, 1}, 4);
    CHECK(a.slope == b.slope);
    for (std::size_t i = 0; i < a.samples.size(); ++i)
        CHECK(a.samples[i].occupied == b.samples[i].occupied);
}

TEST_CASE("estimate_fd: empty cloud is an error")
{
    StateCloud cloud;
    cloud.dim = 2;
    CHECK_THROWS_AS((void)estimate_fd(cloud, {4, 8}), std::invalid_argument);
}

TEST_CASE("default_epsilons is the published resolution set")
{
    const std::vector<int> expected = {300, 500, 600, 650, 700,  750,
                                       800, 850, 900, 950, 1000};
    CHECK(default_epsilons() == expected);
}

TEST_CASE("capacity_bound: two saturated neurons at double precision")
{
    FdEstimate fd;
    fd.slope = 2.0;
    const CapacityReport r = capacity_bound(fd, 2, 53.0);
    CHECK(r.i_max == doctest::Approx(106.0));
    CHECK(r.i_bound == doctest::Approx(106.0));
}

TEST_CASE("capacity_bound: zero and fractional dimensions")
{
    FdEstimate fd;
    fd.slope = 0.0;
    CHECK(capacity_bound(fd, 2).i_bound == doctest::Approx(0.0));
    fd.slope = 1.2;
    CHECK(capacity_bound(fd, 2).i_bound == doctest::Approx(63.6));
}

TEST_CASE("capacity_bound: slope is clamped to [0, m]")
{
    FdEstimate fd;
    fd.slope = 2.3;  // fit noise above the embedding dimension
    const CapacityReport r = capacity_bound(fd, 2, 53.0);
    CHECK(r.i_bound == doctest::Approx(106.0));
    CHECK(r.i_bound <= r.i_max);

    fd.slope = -0.05;
    CHECK(capacity_bound(fd, 2).i_bound == doctest::Approx(0.0));
}

TEST_CASE("capacity_bound: parameter validation")
{
    FdEstimate fd;
    fd.slope = 1.0;
    CHECK_THROWS_AS((void)capacity_bound(fd, 0), std::invalid_argument);
    CHECK_THROWS_AS((void)capacity_bound(fd, 2, 0.5), std::invalid_argument);
}
