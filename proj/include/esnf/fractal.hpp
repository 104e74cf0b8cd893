#pragma once

#include "esnf/reservoir.hpp"

#include <cstddef>
#include <vector>

namespace esnf {

struct AxisBounds {
    double low = -1.0;
    double high = 1.0;
};

/// Counting grid: `resolution` boxes per axis over the given bounds.
/// Cells are half-open [low, high) per axis with the global top edge
/// closed, so every in-range point belongs to exactly one cell.
struct BoxGrid {
    int resolution = 1;
    std::vector<AxisBounds> bounds;  ///< one entry per axis

    static BoxGrid cube(int resolution, int dim, AxisBounds b = {-1.0, 1.0});
    void validate() const;
};

/// Number of distinct grid cells containing at least one cloud point.
/// A point outside the bounds is an error naming the point.
std::size_t box_count(const StateCloud& cloud, const BoxGrid& grid);

struct FdSample {
    int epsilon = 0;           ///< boxes per axis
    std::size_t occupied = 0;  ///< N(epsilon)
};

/// Result of the log-log slope fit  log N(eps) = d_f * log(eps) + b.
struct FdEstimate {
    std::vector<FdSample> samples;
    double slope = 0.0;      ///< d_f
    double intercept = 0.0;  ///< b
    double r_squared = 0.0;
};

/// Ordinary least squares of log N against log eps (natural logs).
/// Requires >= 2 distinct epsilons and occupied >= 1 everywhere.
FdEstimate richardson_fit(const std::vector<FdSample>& samples);

/// box_count over every epsilon followed by richardson_fit. The same
/// bounds apply to every axis; reservoir clouds live in [-1,1]^m,
/// encoder clouds in [0,1]. Counts for distinct epsilons run in parallel.
FdEstimate estimate_fd(const StateCloud& cloud, const std::vector<int>& epsilons,
                       AxisBounds bounds = {-1.0, 1.0}, int threads = 0);

/// The box resolutions used for the published slope fits.
const std::vector<int>& default_epsilons();

/// Information bounds derived from a fractal-dimension estimate:
/// i_max = m * m_b bits available in the reservoir, and the mutual
/// information bound i_bound = clamp(d_f, 0, m) * m_b.
struct CapacityReport {
    int m = 0;
    double m_b = 53.0;  ///< bits of usable resolution per neuron
    double i_max = 0.0;
    double i_bound = 0.0;
};

CapacityReport capacity_bound(const FdEstimate& fd, int m, double m_b = 53.0);

}  // namespace esnf
