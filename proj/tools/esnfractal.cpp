// Command-line front end: cloud generation, box-counting reports, the
// arithmetic encoder, the SVM separability probe, grid sweeps, and SVG
// rendering. Exit codes: 0 success, 1 computation failure, 2 usage or
// configuration failure.

#include "esnf/arith.hpp"
#include "esnf/fractal.hpp"
#include "esnf/io.hpp"
#include "esnf/render.hpp"
#include "esnf/reservoir.hpp"
#include "esnf/svm.hpp"
#include "esnf/sweep.hpp"

#include <CLI11.hpp>

#include <cctype>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

namespace {

constexpr int kExitComputation = 1;
constexpr int kExitUsage = 2;

// Thrown for bad inputs discovered after flag parsing (missing files,
// malformed configs); maps to exit 2 like any other usage problem.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string load_input(const std::string& path)
{
    try {
        return esnf::io::read_file(path);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
}

esnf::SymbolModel load_model(const std::string& path)
{
    const std::string text = load_input(path);
    try {
        return esnf::io::parse_symbol_model(text);
    } catch (const std::exception& e) {
        throw UsageError("bad model: " + std::string(e.what()));
    }
}

std::vector<std::string> parse_tokens(const std::string& csv)
{
    std::vector<std::string> out;
    std::string cur;
    for (char ch : csv) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(ch))) {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

struct Args {
    std::string config, out, json_out, model, true_model, assumed_model;
    std::string cloud_path, sweep_path, seq;
    std::vector<int> epsilons;
    double x0 = 0.0, x = 0.0, bound_low = -1.0, bound_high = 1.0;
    double sigma = 0.05, c = 2.0, tol = 1e-3;
    std::size_t steps = 0, n = 100000, T = 12, sample = 0, max_points = 100000;
    std::uint64_t seed = 0;
    bool trends = false;
};

int run(int argc, char** argv)
{
    CLI::App app{"Fractal analysis of binary-driven echo-state networks"};
    app.require_subcommand(1);
    Args a;

    auto* cloud = app.add_subcommand(
        "cloud", "Generate a labeled state cloud from a reservoir config");
    cloud->add_option("--config", a.config, "JSON reservoir config")->required();
    cloud->add_option("--out", a.out, "Output cloud CSV")->required();

    auto* fd = app.add_subcommand(
        "fd", "Estimate the box-counting dimension of a cloud CSV");
    fd->add_option("--cloud", a.cloud_path, "Input cloud CSV")->required();
    fd->add_option("--epsilons", a.epsilons,
                   "Box resolutions (default: the published set)")
        ->delimiter(',');
    fd->add_option("--low", a.bound_low, "Grid lower bound per axis (default -1)");
    fd->add_option("--high", a.bound_high, "Grid upper bound per axis (default 1)");
    fd->add_option("--out", a.out, "Report CSV (default stdout)");
    fd->add_option("--json", a.json_out, "Also write the estimate as JSON");

    auto* encode = app.add_subcommand("encode", "Arithmetic-encode a sequence");
    encode->add_option("--model", a.model, "Symbol model JSON")->required();
    encode->add_option("--seq", a.seq, "Comma-separated symbols")->required();
    encode->add_option("--x0", a.x0, "Initial value in [0,1] (default 0)");
    encode->add_option("--out", a.out, "Write x,width,bits as CSV");

    auto* decode = app.add_subcommand("decode", "Invert the encoder recursion");
    decode->add_option("--model", a.model, "Symbol model JSON")->required();
    decode->add_option("--x", a.x, "Encoded value in [0,1)")->required();
    decode->add_option("--steps", a.steps, "Number of symbols to recover")
        ->required();

    auto* mismatch = app.add_subcommand(
        "mismatch", "Encode sequences of one model with another; emit the "
                    "1-D cloud of final values");
    mismatch->add_option("--true", a.true_model, "Source model JSON")->required();
    mismatch->add_option("--assumed", a.assumed_model, "Coding model JSON")
        ->required();
    mismatch->add_option("--n", a.n, "Number of sequences (default 100000)");
    mismatch->add_option("--T", a.T, "Sequence length (default 12)");
    mismatch->add_option("--seed", a.seed, "Master seed");
    mismatch->add_option("--out", a.out, "Output cloud CSV")->required();

    auto* svm = app.add_subcommand(
        "svm", "Train the RBF-kernel separability probe on a cloud CSV");
    svm->add_option("--cloud", a.cloud_path, "Input cloud CSV")->required();
    svm->add_option("--sample", a.sample, "Subsample this many states (0 = all)");
    svm->add_option("--sigma", a.sigma, "Kernel width (default 0.05)");
    svm->add_option("--c", a.c, "Box constraint (default 2.0)");
    svm->add_option("--tol", a.tol, "KKT tolerance (default 1e-3)");
    svm->add_option("--seed", a.seed, "Solver seed");
    svm->add_option("--out", a.out, "Model summary JSON (default stdout)");

    auto* sweep = app.add_subcommand("sweep", "Run an (alpha, beta) grid sweep");
    sweep->add_option("--spec", a.config, "Sweep spec JSON")->required();
    sweep->add_option("--out", a.out, "Result CSV")->required();
    sweep->add_flag("--trends", a.trends, "Print the trend summary");

    auto* render = app.add_subcommand(
        "render", "Render a cloud scatter or a sweep surface as SVG");
    auto* rc = render->add_option("--cloud", a.cloud_path, "Cloud CSV to scatter");
    auto* rs = render->add_option("--sweep", a.sweep_path, "Sweep CSV to heatmap");
    render->add_option("--max-points", a.max_points,
                       "Scatter subsample budget (default 100000)");
    render->add_option("--out", a.out, "Output SVG")->required();
    rc->excludes(rs);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    if (cloud->parsed()) {
        const esnf::io::CloudJob job = [&] {
            const std::string text = load_input(a.config);
            try {
                return esnf::io::parse_cloud_job(text);
            } catch (const std::exception& e) {
                throw UsageError("bad config: " + std::string(e.what()));
            }
        }();
        const esnf::StateCloud result = esnf::generate_cloud(
            job.cfg, job.n_sequences, job.steps, job.washout, job.seed, job.p_plus);
        esnf::io::write_file(a.out, esnf::io::cloud_to_csv(result));
    } else if (fd->parsed()) {
        const esnf::StateCloud c = esnf::io::cloud_from_csv(load_input(a.cloud_path));
        const std::vector<int>& eps =
            a.epsilons.empty() ? esnf::default_epsilons() : a.epsilons;
        const esnf::FdEstimate est =
            esnf::estimate_fd(c, eps, {a.bound_low, a.bound_high});
        const std::string report = esnf::io::fd_report_csv(est);
        if (a.out.empty())
            std::fputs(report.c_str(), stdout);
        else
            esnf::io::write_file(a.out, report);
        if (!a.json_out.empty())
            esnf::io::write_file(a.json_out, esnf::io::fd_to_json(est));
    } else if (encode->parsed()) {
        const esnf::SymbolModel model = load_model(a.model);
        const std::vector<std::string> seq = parse_tokens(a.seq);
        const esnf::EncoderState s = esnf::encode(seq, model, a.x0);
        const double bits = esnf::code_length_bits(seq, model);
        std::printf("x=%s,width=%s,bits=%s\n", esnf::io::format_double(s.x).c_str(),
                    esnf::io::format_double(s.width).c_str(),
                    esnf::io::format_double(bits).c_str());
        if (!a.out.empty()) {
            std::string csv = "x,width,bits\n";
            csv += esnf::io::format_double(s.x) + "," +
                   esnf::io::format_double(s.width) + "," +
                   esnf::io::format_double(bits) + "\n";
            esnf::io::write_file(a.out, csv);
        }
    } else if (decode->parsed()) {
        const esnf::SymbolModel model = load_model(a.model);
        const std::vector<std::string> symbols = esnf::decode(a.x, a.steps, model);
        std::string joined;
        for (std::size_t i = 0; i < symbols.size(); ++i) {
            joined += symbols[i];
            if (i + 1 < symbols.size()) joined += ',';
        }
        std::printf("%s\n", joined.c_str());
    } else if (mismatch->parsed()) {
        const esnf::SymbolModel true_m = load_model(a.true_model);
        const esnf::SymbolModel assumed_m = load_model(a.assumed_model);
        const esnf::StateCloud c =
            esnf::mismatch_cloud(true_m, assumed_m, a.n, a.T, a.seed);
        esnf::io::write_file(a.out, esnf::io::cloud_to_csv(c));
    } else if (svm->parsed()) {
        const esnf::StateCloud c = esnf::io::cloud_from_csv(load_input(a.cloud_path));
        const esnf::LabeledSet data = esnf::LabeledSet::from_cloud(c, a.sample);
        esnf::SvmTrainOptions opts;
        opts.tol = a.tol;
        opts.seed = a.seed == 0 ? 1 : a.seed;
        const esnf::SvmModel model = esnf::train(data, {a.sigma, a.c}, opts);
        const std::string summary = esnf::io::svm_summary_json(model);
        if (a.out.empty())
            std::fputs(summary.c_str(), stdout);
        else
            esnf::io::write_file(a.out, summary);
    } else if (sweep->parsed()) {
        const esnf::SweepSpec spec = [&] {
            const std::string text = load_input(a.config);
            try {
                return esnf::io::parse_sweep_spec(text);
            } catch (const std::exception& e) {
                throw UsageError("bad spec: " + std::string(e.what()));
            }
        }();
        const esnf::SweepResult result = esnf::run_sweep(spec);
        esnf::io::write_file(a.out, esnf::io::sweep_to_csv(result));
        if (a.trends) {
            const esnf::TrendReport tr = esnf::trend_report(result);
            for (const auto& t : tr.df_vs_beta)
                std::printf("alpha=%s: spearman(d_f,beta)=%s over %zu cells\n",
                            esnf::io::format_double(t.fixed_value).c_str(),
                            esnf::io::format_double(t.rho).c_str(), t.n);
            for (const auto& t : tr.df_vs_alpha)
                std::printf("beta=%s: spearman(d_f,alpha)=%s over %zu cells\n",
                            esnf::io::format_double(t.fixed_value).c_str(),
                            esnf::io::format_double(t.rho).c_str(), t.n);
            for (const auto& t : tr.sv_vs_alpha)
                std::printf("beta=%s: spearman(n_sv,alpha)=%s over %zu cells\n",
                            esnf::io::format_double(t.fixed_value).c_str(),
                            esnf::io::format_double(t.rho).c_str(), t.n);
        }
    } else if (render->parsed()) {
        if (!a.cloud_path.empty()) {
            const esnf::StateCloud c =
                esnf::io::cloud_from_csv(load_input(a.cloud_path));
            esnf::io::write_file(a.out, esnf::render_scatter_svg(c, a.max_points));
        } else if (!a.sweep_path.empty()) {
            const esnf::SweepResult r =
                esnf::io::sweep_from_csv(load_input(a.sweep_path));
            esnf::io::write_file(a.out, esnf::render_surface_svg(r));
        } else {
            throw UsageError("render needs --cloud or --sweep");
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    try {
        return run(argc, argv);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitComputation;
    }
}
