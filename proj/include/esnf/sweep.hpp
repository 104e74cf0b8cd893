#pragma once

#include "esnf/fractal.hpp"
#include "esnf/reservoir.hpp"
#include "esnf/svm.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace esnf {

/// Cloud-generation budget shared by every grid cell.
struct CloudParams {
    std::size_t n_sequences = 100;
    std::size_t steps = 11000;
    std::size_t washout = 1000;
    std::uint64_t seed = 0;
    double p_plus = 0.5;
};

/// Optional separability probe: subsample `sample` states and train the
/// kernel classifier on them.
struct SvmProbeParams {
    KernelParams kernel;
    std::size_t sample = 3000;
    SvmTrainOptions train;
};

struct SweepSpec {
    std::vector<double> alphas;  ///< strictly increasing
    std::vector<double> betas;   ///< strictly increasing
    Matrix W;                    ///< fixed template weights
    Vector w_in;
    CloudParams cloud;
    std::vector<int> epsilons;
    std::optional<SvmProbeParams> svm;
    int threads = 0;  ///< cell worker count; 0 = hardware

    void validate() const;
};

struct SweepCell {
    double alpha = 0.0;
    double beta = 0.0;
    double d_f = 0.0;
    double r_squared = 0.0;
    std::optional<std::size_t> n_sv;
    std::optional<double> train_accuracy;
    std::string error;  ///< empty on success; failed cells keep d_f = 0
};

/// One cell per (alpha, beta), ordered by (alpha index, beta index).
struct SweepResult {
    std::vector<double> alphas;
    std::vector<double> betas;
    std::vector<SweepCell> cells;  ///< row-major: alpha outer, beta inner

    const SweepCell& at(std::size_t ai, std::size_t bi) const
    {
        return cells[ai * betas.size() + bi];
    }
};

/// Runs the grid. Each cell derives its seed from (master seed, alpha
/// value, beta value) so results do not depend on which other grid values
/// exist, on evaluation order, or on the worker count. Per-cell failures
/// are recorded in the cell instead of aborting the sweep.
SweepResult run_sweep(const SweepSpec& spec);

/// Spearman rank correlation with average ranks for ties. Returns 0 when
/// either input has no variation ("no trend").
double spearman(std::span<const double> x, std::span<const double> y);

struct TrendLine {
    double fixed_value = 0.0;  ///< the alpha of the row / beta of the column
    double rho = 0.0;
    std::size_t n = 0;
};

/// Monotonicity summary: d_f against beta per alpha row (restricted to
/// beta >= beta_min), d_f against alpha per beta column, and the support
/// vector count against alpha when the sweep probed the SVM.
struct TrendReport {
    std::vector<TrendLine> df_vs_beta;   ///< one per alpha
    std::vector<TrendLine> df_vs_alpha;  ///< one per beta
    std::vector<TrendLine> sv_vs_alpha;  ///< one per beta, if SVM cells exist
};

TrendReport trend_report(const SweepResult& result, double beta_min = 0.0);

}  // namespace esnf
