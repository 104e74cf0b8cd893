#pragma once

#include "esnf/reservoir.hpp"

#include <cstdint>
#include <vector>

namespace esnf {

/// Gaussian kernel width and soft-margin box constraint.
struct KernelParams {
    double sigma = 0.05;
    double c = 2.0;

    void validate() const;
};

/// Binary-labeled training points, stored flat like StateCloud.
struct LabeledSet {
    int dim = 0;
    std::vector<double> points;      ///< size() * dim, row-major
    std::vector<std::int8_t> labels; ///< -1 / +1

    std::size_t size() const { return labels.size(); }
    const double* point_data(std::size_t i) const { return points.data() + i * dim; }
    void push(const Vector& p, std::int8_t label);

    /// Uniform-stride subsample of a labeled cloud (max_points = 0 keeps all).
    static LabeledSet from_cloud(const StateCloud& cloud, std::size_t max_points = 0);
};

/// K(a, b) = exp(-|a - b|^2 / (2 sigma^2)); 1 exactly iff a = b.
double rbf_kernel(const Vector& a, const Vector& b, double sigma);

struct SvmTrainOptions {
    double tol = 1e-3;                  ///< KKT violation tolerance
    std::size_t max_stalled_sweeps = 200; ///< sweeps without an update before giving up
    std::size_t max_sweeps = 100000;    ///< hard cap on optimization sweeps
    std::uint64_t seed = 1;             ///< RNG for the second-index fallback scan
};

/// Trained soft-margin model; only points with dual weight above 1e-8 are
/// kept, so the stored vectors are exactly the support vectors.
struct SvmModel {
    int dim = 0;
    std::vector<double> support_vectors; ///< sv_count * dim, row-major
    std::vector<double> dual_coefs;      ///< alpha_i * y_i per support vector
    double bias = 0.0;
    KernelParams params;
    double train_accuracy = 0.0;

    std::size_t sv_count() const { return dual_coefs.size(); }
};

/// Sequential minimal optimization on the soft-margin dual. Deterministic
/// for a fixed options seed. Throws "degenerate labels" when one class is
/// missing and a diagnostic error when no progress is possible before the
/// KKT conditions hold within tol.
SvmModel train(const LabeledSet& data, const KernelParams& params,
               const SvmTrainOptions& opts = {});

/// Decision function sum_i dual_i K(sv_i, x) + bias.
double decision_value(const SvmModel& model, const Vector& x);

/// Sign of the decision value; an exact 0 maps to +1.
int predict(const SvmModel& model, const Vector& x);

std::size_t sv_count(const SvmModel& model);

/// Value of the dual objective at the trained point,
/// sum alpha_i - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij.
double dual_objective(const SvmModel& model);

}  // namespace esnf
