#include "esnf/reservoir.hpp"
#include "esnf/rng.hpp"
#include "digest.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>
#include <thread>

namespace esnf {

namespace {

using detail::Fnv1a;

bool all_finite(const Matrix& M) { return M.allFinite(); }

void require(bool cond, const char* msg)
{
    if (!cond) throw std::invalid_argument(msg);
}

std::string cloud_digest(const ReservoirConfig& cfg, std::size_t n_sequences,
                         std::size_t steps, std::size_t washout,
                         std::uint64_t seed, double p_plus)
{
    Fnv1a h;
    h.absorb_u64(static_cast<std::uint64_t>(cfg.size()));
    for (int i = 0; i < cfg.W.rows(); ++i)
        for (int j = 0; j < cfg.W.cols(); ++j) h.absorb_d(cfg.W(i, j));
    for (int i = 0; i < cfg.w_in.size(); ++i) h.absorb_d(cfg.w_in(i));
    h.absorb_d(cfg.alpha);
    h.absorb_d(cfg.beta);
    h.absorb_u64(n_sequences);
    h.absorb_u64(steps);
    h.absorb_u64(washout);
    h.absorb_u64(seed);
    h.absorb_d(p_plus);
    return h.hex();
}

}  // namespace

void ReservoirConfig::validate() const
{
    require(W.rows() == W.cols(), "reservoir config: W must be square");
    require(W.rows() == w_in.size(),
            "reservoir config: dimension mismatch between W and w_in");
    require(w_in.size() > 0, "reservoir config: empty weights");
    require(all_finite(W) && w_in.allFinite(),
            "reservoir config: non-finite weights");
    require(std::isfinite(alpha) && alpha >= 0.0,
            "reservoir config: alpha must be finite and non-negative");
    require(std::isfinite(beta) && beta >= 0.0,
            "reservoir config: beta must be finite and non-negative");
}

InputSequence::InputSequence(std::vector<std::int8_t> s) : symbols(std::move(s))
{
    for (std::int8_t u : symbols)
        require(u == 1 || u == -1, "input sequence: symbols must be -1 or +1");
}

InputSequence InputSequence::random(std::size_t length, std::uint64_t seed,
                                    double p_plus)
{
    require(p_plus >= 0.0 && p_plus <= 1.0,
            "input sequence: p_plus must lie in [0, 1]");
    InputSequence seq;
    seq.symbols.resize(length);
    SplitMix64 rng(seed);
    for (std::size_t t = 0; t < length; ++t)
        seq.symbols[t] = rng.next_u01() < p_plus ? std::int8_t{1} : std::int8_t{-1};
    return seq;
}

StatePoint StateCloud::point(std::size_t i) const
{
    StatePoint p;
    p.coords = Eigen::Map<const Vector>(point_data(i), dim);
    p.label = labels[i];
    return p;
}

void StateCloud::push(const Vector& p, std::int8_t label)
{
    if (dim == 0) dim = static_cast<int>(p.size());
    require(static_cast<int>(p.size()) == dim,
            "state cloud: dimension mismatch");
    require(label == 1 || label == -1, "state cloud: label must be -1 or +1");
    coords.insert(coords.end(), p.data(), p.data() + p.size());
    labels.push_back(label);
}

double spectral_norm(const Matrix& M)
{
    Eigen::JacobiSVD<Matrix> svd(M);
    return svd.singularValues()(0);
}

Matrix normalize_spectral(const Matrix& M)
{
    require(M.size() > 0 && all_finite(M), "normalize: non-finite weights");
    const double s = spectral_norm(M);
    require(s > 0.0, "normalize: degenerate weights");
    return M / s;
}

Vector normalize_spectral(const Vector& v)
{
    require(v.size() > 0 && v.allFinite(), "normalize: non-finite weights");
    const double n = v.norm();
    require(n > 0.0, "normalize: degenerate weights");
    return v / n;
}

Matrix rotation_scaled(double angle_rad, double scale)
{
    Matrix R(2, 2);
    const double c = std::cos(angle_rad), s = std::sin(angle_rad);
    R << c, -s, s, c;
    return scale * R;
}

Vector step(const Vector& x, int u, const ReservoirConfig& cfg)
{
    cfg.validate();
    require(x.size() == cfg.w_in.size(), "step: dimension mismatch");
    require(u == 1 || u == -1, "step: symbol must be -1 or +1");
    Vector pre = cfg.alpha * (cfg.W * x) + (cfg.beta * static_cast<double>(u)) * cfg.w_in;
    return pre.array().tanh().matrix();
}

std::vector<Vector> drive(const ReservoirConfig& cfg, const InputSequence& seq,
                          const Vector& x0)
{
    cfg.validate();
    require(seq.length() > 0, "drive: empty input sequence");
    require(x0.size() == cfg.w_in.size(), "drive: dimension mismatch");

    std::vector<Vector> traj;
    traj.reserve(seq.length());
    Vector x = x0;
    for (std::int8_t u : seq.symbols) {
        x = (cfg.alpha * (cfg.W * x) +
             (cfg.beta * static_cast<double>(u)) * cfg.w_in)
                .array()
                .tanh()
                .matrix();
        traj.push_back(x);
    }
    return traj;
}

StateCloud generate_cloud(const ReservoirConfig& cfg, std::size_t n_sequences,
                          std::size_t steps_per_sequence, std::size_t washout,
                          std::uint64_t seed, double p_plus, int threads)
{
    cfg.validate();
    require(p_plus >= 0.0 && p_plus <= 1.0,
            "generate_cloud: p_plus must lie in [0, 1]");

    StateCloud cloud;
    cloud.dim = cfg.size();
    cloud.config_digest =
        cloud_digest(cfg, n_sequences, steps_per_sequence, washout, seed, p_plus);

    if (n_sequences == 0 || steps_per_sequence <= washout) return cloud;
    const std::size_t retained = steps_per_sequence - washout;
    const std::size_t m = static_cast<std::size_t>(cloud.dim);

    cloud.coords.resize(n_sequences * retained * m);
    cloud.labels.resize(n_sequences * retained);

    auto run_sequence = [&](std::size_t s) {
        SplitMix64 rng(substream_seed(seed, s));
        Vector x = Vector::Zero(static_cast<int>(m));
        double* out = cloud.coords.data() + s * retained * m;
        std::int8_t* lab = cloud.labels.data() + s * retained;
        for (std::size_t t = 0; t < steps_per_sequence; ++t) {
            const int u = rng.next_u01() < p_plus ? 1 : -1;
            x = (cfg.alpha * (cfg.W * x) +
                 (cfg.beta * static_cast<double>(u)) * cfg.w_in)
                    .array()
                    .tanh()
                    .matrix();
            if (t >= washout) {
                const std::size_t k = t - washout;
                for (std::size_t d = 0; d < m; ++d) out[k * m + d] = x(static_cast<int>(d));
                lab[k] = static_cast<std::int8_t>(u);
            }
        }
    };

    unsigned n_workers = threads > 0 ? static_cast<unsigned>(threads)
                                     : std::thread::hardware_concurrency();
    if (n_workers == 0) n_workers = 1;
    n_workers = std::min<std::size_t>(n_workers, n_sequences);

    if (n_workers <= 1) {
        for (std::size_t s = 0; s < n_sequences; ++s) run_sequence(s);
    } else {
        // Each worker owns a strided subset; sequences write disjoint slices,
        // so the merged result is schedule independent.
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (unsigned w = 0; w < n_workers; ++w) {
            pool.emplace_back([&, w]() {
                for (std::size_t s = w; s < n_sequences; s += n_workers)
                    run_sequence(s);
            });
        }
        for (auto& th : pool) th.join();
    }
    return cloud;
}

std::vector<double> esp_contraction(const ReservoirConfig& cfg,
                                    const InputSequence& seq, const Vector& x0a,
                                    const Vector& x0b)
{
    cfg.validate();
    require(x0a.size() == x0b.size() && x0a.size() == cfg.w_in.size(),
            "esp_contraction: dimension mismatch");

    std::vector<double> dist;
    dist.reserve(seq.length());
    Vector xa = x0a, xb = x0b;
    for (std::int8_t u : seq.symbols) {
        const double bu = cfg.beta * static_cast<double>(u);
        xa = (cfg.alpha * (cfg.W * xa) + bu * cfg.w_in).array().tanh().matrix();
        xb = (cfg.alpha * (cfg.W * xb) + bu * cfg.w_in).array().tanh().matrix();
        dist.push_back((xa - xb).norm());
    }
    return dist;
}

}  // namespace esnf
