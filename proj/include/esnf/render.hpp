#pragma once

#include "esnf/reservoir.hpp"
#include "esnf/sweep.hpp"

#include <string>

namespace esnf {

/// Scatter plot of a 2-neuron state cloud over [-1,1]^2, points colored by
/// their last-input label. Subsampling uses a fixed stride so the output
/// is byte-identical for identical inputs. Requires dim == 2.
std::string render_scatter_svg(const StateCloud& cloud,
                               std::size_t max_points = 100000);

/// Heatmap of a full rectangular sweep: alpha on the x axis, beta on the
/// y axis, the fitted dimension as color, with a printed color scale.
/// Cells that recorded an error are drawn gray.
std::string render_surface_svg(const SweepResult& result);

}  // namespace esnf
