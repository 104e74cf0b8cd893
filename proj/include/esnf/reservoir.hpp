#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace esnf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Fixed weights and gains of the ESN update
///   x_{t+1} = tanh(alpha * W * x_t + beta * w_in * u_t).
struct ReservoirConfig {
    Matrix W;           ///< m x m recurrent weights
    Vector w_in;        ///< input weights, length m
    double alpha = 1.0; ///< recurrent gain, >= 0
    double beta = 1.0;  ///< input gain, >= 0

    int size() const { return static_cast<int>(w_in.size()); }

    /// Throws std::invalid_argument if shapes disagree, gains are negative,
    /// or any entry is non-finite.
    void validate() const;
};

/// Binary input stream; symbols are restricted to {-1, +1}.
struct InputSequence {
    std::vector<std::int8_t> symbols;

    InputSequence() = default;
    explicit InputSequence(std::vector<std::int8_t> s);

    std::size_t length() const { return symbols.size(); }

    /// i.i.d. symbols, +1 with probability p_plus. Deterministic in seed.
    static InputSequence random(std::size_t length, std::uint64_t seed,
                                double p_plus = 0.5);
};

/// One recorded hidden state tagged with the input symbol that produced it.
struct StatePoint {
    Vector coords;
    std::int8_t label = 1;  // -1 or +1
};

/// Ordered set of labeled state points, all of the same dimensionality.
/// Stored flat (row-major) so million-point clouds stay cache friendly.
struct StateCloud {
    int dim = 0;
    std::vector<double> coords;       ///< size() * dim, row-major
    std::vector<std::int8_t> labels;  ///< size()
    std::string config_digest;

    std::size_t size() const { return labels.size(); }
    bool empty() const { return labels.empty(); }

    const double* point_data(std::size_t i) const { return coords.data() + i * dim; }
    double coord(std::size_t i, int axis) const { return coords[i * dim + axis]; }

    StatePoint point(std::size_t i) const;
    void push(const Vector& p, std::int8_t label);
};

/// Scales M so its largest singular value is 1. Vectors are divided by
/// their Euclidean norm. Throws on zero or non-finite input
/// ("degenerate weights").
Matrix normalize_spectral(const Matrix& M);
Vector normalize_spectral(const Vector& v);

/// Largest singular value of M.
double spectral_norm(const Matrix& M);

/// 2x2 rotation by angle_rad, multiplied by scale.
Matrix rotation_scaled(double angle_rad, double scale);

/// One update of the state recursion. u must be -1 or +1.
Vector step(const Vector& x, int u, const ReservoirConfig& cfg);

/// Full trajectory; element t is the state after consuming symbols 0..t.
std::vector<Vector> drive(const ReservoirConfig& cfg, const InputSequence& seq,
                          const Vector& x0);

/// Drives n_sequences independent random +-1 streams from x0 = 0, discards
/// the first `washout` states of each, and records the remainder labeled by
/// the symbol that produced them. Sequence i uses the substream (seed, i),
/// so the result is bit-identical for a given (cfg, counts, seed) no matter
/// how many worker threads run. threads = 0 picks hardware concurrency.
StateCloud generate_cloud(const ReservoirConfig& cfg, std::size_t n_sequences,
                          std::size_t steps_per_sequence, std::size_t washout,
                          std::uint64_t seed, double p_plus = 0.5,
                          int threads = 0);

/// Euclidean distance between two trajectories driven by the same input,
/// one entry per step. Zero initial separation stays zero.
std::vector<double> esp_contraction(const ReservoirConfig& cfg,
                                    const InputSequence& seq, const Vector& x0a,
                                    const Vector& x0b);

}  // namespace esnf
