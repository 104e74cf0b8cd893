#include "esnf/sweep.hpp"
#include "esnf/rng.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace esnf {

namespace {

void require(bool cond, const char* msg)
{
    if (!cond) throw std::invalid_argument(msg);
}

bool strictly_increasing(const std::vector<double>& v)
{
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] > v[i - 1])) return false;
    return true;
}

// Seeds depend on the cell's (alpha, beta) values, not grid indices, so
// removing a grid value leaves every other cell untouched.
std::uint64_t cell_seed(std::uint64_t master, double alpha, double beta)
{
    return substream_seed(master, std::bit_cast<std::uint64_t>(alpha),
                          std::bit_cast<std::uint64_t>(beta));
}

std::vector<double> ranks(std::span<const double> v)
{
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });

    std::vector<double> r(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;  // average rank
        for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
        i = j + 1;
    }
    return r;
}

}  // namespace

void SweepSpec::validate() const
{
    require(!alphas.empty(), "sweep: empty grid");
    require(!betas.empty(), "sweep: empty grid");
    require(strictly_increasing(alphas), "sweep: alphas must be strictly increasing");
    require(strictly_increasing(betas), "sweep: betas must be strictly increasing");
    require(cloud.n_sequences > 0 && cloud.steps > cloud.washout,
            "sweep: cloud budget must retain at least one step");
    require(epsilons.size() >= 2, "sweep: need >= 2 epsilons");
    require(W.rows() == W.cols() && W.rows() == w_in.size() && w_in.size() > 0,
            "sweep: dimension mismatch between W and w_in");
    if (svm) {
        svm->kernel.validate();
        require(svm->sample >= 2, "sweep: svm sample must be >= 2");
    }
}

SweepResult run_sweep(const SweepSpec& spec)
{
    spec.validate();

    SweepResult result;
    result.alphas = spec.alphas;
    result.betas = spec.betas;
    result.cells.resize(spec.alphas.size() * spec.betas.size());

    auto run_cell = [&](std::size_t idx) {
        const std::size_t ai = idx / spec.betas.size();
        const std::size_t bi = idx % spec.betas.size();
        SweepCell& cell = result.cells[idx];
        cell.alpha = spec.alphas[ai];
        cell.beta = spec.betas[bi];
        try {
            ReservoirConfig cfg;
            cfg.W = spec.W;
            cfg.w_in = spec.w_in;
            cfg.alpha = cell.alpha;
            cfg.beta = cell.beta;

            const std::uint64_t seed =
                cell_seed(spec.cloud.seed, cell.alpha, cell.beta);
            // Cells already run in parallel; keep each cell single threaded.
            const StateCloud cloud =
                generate_cloud(cfg, spec.cloud.n_sequences, spec.cloud.steps,
                               spec.cloud.washout, seed, spec.cloud.p_plus, 1);

            const FdEstimate fd =
                estimate_fd(cloud, spec.epsilons, {-1.0, 1.0}, 1);
            cell.d_f = fd.slope;
            cell.r_squared = fd.r_squared;

            if (spec.svm) {
                LabeledSet training = LabeledSet::from_cloud(cloud, spec.svm->sample);
                SvmTrainOptions opts = spec.svm->train;
                opts.seed = substream_seed(seed, 0x53564dull);  // per-cell solver stream
                const SvmModel model = train(training, spec.svm->kernel, opts);
                cell.n_sv = model.sv_count();
                cell.train_accuracy = model.train_accuracy;
            }
        } catch (const std::exception& e) {
            cell.error = e.what();
            cell.d_f = 0.0;
            cell.r_squared = 0.0;
        }
    };

    unsigned n_workers = spec.threads > 0 ? static_cast<unsigned>(spec.threads)
                                          : std::thread::hardware_concurrency();
    if (n_workers == 0) n_workers = 1;
    n_workers = std::min<std::size_t>(n_workers, result.cells.size());

    if (n_workers <= 1) {
        for (std::size_t i = 0; i < result.cells.size(); ++i) run_cell(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (unsigned w = 0; w < n_workers; ++w) {
            pool.emplace_back([&]() {
                while (true) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= result.cells.size()) return;
                    run_cell(i);
                }
            });
        }
        for (auto& th : pool) th.join();
    }
    return result;
}

double spearman(std::span<const double> x, std::span<const double> y)
{
    require(x.size() == y.size(), "spearman: length mismatch");
    require(x.size() >= 2, "spearman: need >= 2 samples");

    const std::vector<double> rx = ranks(x);
    const std::vector<double> ry = ranks(y);
    const double n = static_cast<double>(x.size());

    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= n;
    my /= n;

    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;  // no trend
    return sxy / std::sqrt(sxx * syy);
}

TrendReport trend_report(const SweepResult& result, double beta_min)
{
    require(!result.cells.empty(), "trend report: empty result");
    require(result.alphas.size() >= 2 || result.betas.size() >= 2,
            "trend report: need >= 2 values on some axis");

    TrendReport report;

    if (result.betas.size() >= 2) {
        for (std::size_t ai = 0; ai < result.alphas.size(); ++ai) {
            std::vector<double> betas, dfs;
            for (std::size_t bi = 0; bi < result.betas.size(); ++bi) {
                const SweepCell& c = result.at(ai, bi);
                if (!c.error.empty() || c.beta < beta_min) continue;
                betas.push_back(c.beta);
                dfs.push_back(c.d_f);
            }
            if (betas.size() < 2) continue;
            report.df_vs_beta.push_back(
                {result.alphas[ai], spearman(betas, dfs), betas.size()});
        }
    }

    if (result.alphas.size() >= 2) {
        for (std::size_t bi = 0; bi < result.betas.size(); ++bi) {
            std::vector<double> alphas, dfs, svs;
            bool all_sv = true;
            for (std::size_t ai = 0; ai < result.alphas.size(); ++ai) {
                const SweepCell& c = result.at(ai, bi);
                if (!c.error.empty()) continue;
                alphas.push_back(c.alpha);
                dfs.push_back(c.d_f);
                if (c.n_sv)
                    svs.push_back(static_cast<double>(*c.n_sv));
                else
                    all_sv = false;
            }
            if (alphas.size() < 2) continue;
            report.df_vs_alpha.push_back(
                {result.betas[bi], spearman(alphas, dfs), alphas.size()});
            if (all_sv && svs.size() == alphas.size())
                report.sv_vs_alpha.push_back(
                    {result.betas[bi], spearman(alphas, svs), alphas.size()});
        }
    }

    require(!report.df_vs_beta.empty() || !report.df_vs_alpha.empty(),
            "trend report: insufficient cells");
    return report;
}

}  // namespace esnf
