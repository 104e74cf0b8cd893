#include "esnf/fractal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>
#include <unordered_set>

namespace esnf {

namespace {

void require(bool cond, const std::string& msg)
{
    if (!cond) throw std::invalid_argument(msg);
}

std::string describe_point(const StateCloud& cloud, std::size_t i)
{
    std::string s = "point " + std::to_string(i) + " = (";
    for (int d = 0; d < cloud.dim; ++d) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", cloud.coord(i, d));
        s += buf;
        if (d + 1 < cloud.dim) s += ", ";
    }
    return s + ")";
}

// Per-axis cell index for an in-range coordinate; the top boundary
// belongs to the last cell. The scaled product carries a couple of ulps
// of rounding, so a value that equals a cell boundary up to that rounding
// is snapped onto the boundary before flooring; otherwise boundary-valued
// data (e.g. encoder outputs with terminating triadic expansions) would
// leak into the cell below.
inline long cell_index(double x, const AxisBounds& b, int eps)
{
    const double t = static_cast<double>(eps) * (x - b.low) / (b.high - b.low);
    const double nearest = std::round(t);
    const double tol = 4.0 * std::numeric_limits<double>::epsilon() *
                       std::max(std::abs(nearest), 1.0);
    long k = std::abs(t - nearest) <= tol ? static_cast<long>(nearest)
                                          : static_cast<long>(std::floor(t));
    if (k >= eps) k = eps - 1;  // x at (or rounded onto) the top edge
    return k;
}

// Rejects points outside the grid (NaN included) before any scaling.
inline void check_in_bounds(const StateCloud& cloud, std::size_t i,
                            const BoxGrid& grid)
{
    for (int d = 0; d < cloud.dim; ++d) {
        const double x = cloud.coord(i, d);
        const AxisBounds& b = grid.bounds[static_cast<std::size_t>(d)];
        if (!(x >= b.low && x <= b.high))
            throw std::invalid_argument("box count: out-of-bounds " +
                                        describe_point(cloud, i));
    }
}

}  // namespace

BoxGrid BoxGrid::cube(int resolution, int dim, AxisBounds b)
{
    BoxGrid g;
    g.resolution = resolution;
    g.bounds.assign(static_cast<std::size_t>(dim), b);
    return g;
}

void BoxGrid::validate() const
{
    require(resolution >= 1, "box grid: resolution must be >= 1");
    require(!bounds.empty(), "box grid: no axes");
    for (const auto& b : bounds)
        require(std::isfinite(b.low) && std::isfinite(b.high) && b.low < b.high,
                "box grid: degenerate bounds");
}

std::size_t box_count(const StateCloud& cloud, const BoxGrid& grid)
{
    if (cloud.empty()) return 0;
    grid.validate();
    require(static_cast<int>(grid.bounds.size()) == cloud.dim,
            "box count: grid dimension does not match cloud");

    const int dim = cloud.dim;
    const int eps = grid.resolution;
    const std::size_t n = cloud.size();

    // Cells are keyed mixed-radix when eps^dim fits in 64 bits; otherwise an
    // exact tuple set is used. Memory scales with occupied boxes.
    bool fits64 = true;
    std::uint64_t radix_span = 1;
    for (int d = 0; d < dim; ++d) {
        if (radix_span > UINT64_MAX / static_cast<std::uint64_t>(eps)) {
            fits64 = false;
            break;
        }
        radix_span *= static_cast<std::uint64_t>(eps);
    }

    if (fits64) {
        std::unordered_set<std::uint64_t> cells;
        cells.reserve(std::min<std::size_t>(n, radix_span));
        for (std::size_t i = 0; i < n; ++i) {
            check_in_bounds(cloud, i, grid);
            std::uint64_t key = 0;
            for (int d = 0; d < dim; ++d) {
                const long k = cell_index(
                    cloud.coord(i, d), grid.bounds[static_cast<std::size_t>(d)],
                    eps);
                key = key * static_cast<std::uint64_t>(eps) +
                      static_cast<std::uint64_t>(k);
            }
            cells.insert(key);
        }
        return cells.size();
    }

    std::set<std::vector<long>> cells;
    std::vector<long> key(static_cast<std::size_t>(dim));
    for (std::size_t i = 0; i < n; ++i) {
        check_in_bounds(cloud, i, grid);
        for (int d = 0; d < dim; ++d)
            key[static_cast<std::size_t>(d)] = cell_index(
                cloud.coord(i, d), grid.bounds[static_cast<std::size_t>(d)], eps);
        cells.insert(key);
    }
    return cells.size();
}

FdEstimate richardson_fit(const std::vector<FdSample>& samples)
{
    std::set<int> distinct;
    for (const auto& s : samples) {
        require(s.epsilon >= 1, "richardson fit: epsilon must be >= 1");
        require(s.occupied >= 1,
                "richardson fit: zero occupied boxes (log undefined)");
        distinct.insert(s.epsilon);
    }
    require(distinct.size() >= 2, "richardson fit: need >= 2 distinct epsilons");

    const std::size_t n = samples.size();
    double sx = 0, sy = 0;
    for (const auto& s : samples) {
        sx += std::log(static_cast<double>(s.epsilon));
        sy += std::log(static_cast<double>(s.occupied));
    }
    const double mx = sx / static_cast<double>(n);
    const double my = sy / static_cast<double>(n);

    double sxx = 0, sxy = 0, syy = 0;
    for (const auto& s : samples) {
        const double dx = std::log(static_cast<double>(s.epsilon)) - mx;
        const double dy = std::log(static_cast<double>(s.occupied)) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }

    FdEstimate fd;
    fd.samples = samples;
    fd.slope = sxy / sxx;
    fd.intercept = my - fd.slope * mx;

    const double ss_res = syy - fd.slope * sxy;
    if (syy > 0.0) {
        fd.r_squared = 1.0 - ss_res / syy;
    } else {
        // All counts equal: the constant line fits exactly.
        fd.r_squared = 1.0;
    }
    return fd;
}

FdEstimate estimate_fd(const StateCloud& cloud, const std::vector<int>& epsilons,
                       AxisBounds bounds, int threads)
{
    require(!cloud.empty(), "estimate_fd: empty cloud");

    std::vector<FdSample> samples(epsilons.size());
    for (std::size_t i = 0; i < epsilons.size(); ++i)
        samples[i].epsilon = epsilons[i];

    auto count_one = [&](std::size_t i) {
        samples[i].occupied =
            box_count(cloud, BoxGrid::cube(samples[i].epsilon, cloud.dim, bounds));
    };

    unsigned n_workers = threads > 0 ? static_cast<unsigned>(threads)
                                     : std::thread::hardware_concurrency();
    if (n_workers == 0) n_workers = 1;
    n_workers = std::min<std::size_t>(n_workers, epsilons.size());

    std::exception_ptr failure;
    if (n_workers <= 1) {
        for (std::size_t i = 0; i < samples.size(); ++i) count_one(i);
    } else {
        std::mutex mtx;
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < n_workers; ++w) {
            pool.emplace_back([&, w]() {
                try {
                    for (std::size_t i = w; i < samples.size(); i += n_workers)
                        count_one(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(mtx);
                    if (!failure) failure = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    return richardson_fit(samples);
}

const std::vector<int>& default_epsilons()
{
    static const std::vector<int> eps = {300, 500, 600, 650, 700, 750,
                                         800, 850, 900, 950, 1000};
    return eps;
}

CapacityReport capacity_bound(const FdEstimate& fd, int m, double m_b)
{
    require(m >= 1, "capacity bound: m must be >= 1");
    require(m_b >= 1.0, "capacity bound: m_b must be >= 1");

    CapacityReport r;
    r.m = m;
    r.m_b = m_b;
    r.i_max = static_cast<double>(m) * m_b;
    const double d_f = std::clamp(fd.slope, 0.0, static_cast<double>(m));
    r.i_bound = d_f * m_b;
    return r;
}

}  // namespace esnf
