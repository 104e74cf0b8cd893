#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "esnf/sweep.hpp"

#include <cmath>

using namespace esnf;

namespace {

SweepSpec small_spec()
{
    SweepSpec spec;
    spec.alphas = {0.7, 1.0};
    spec.betas = {0.45, 0.8, 1.2};
    spec.W = Matrix(2, 2);
    spec.W << 0.0169, 0.5711, 1.2895, 0.2509;
    spec.w_in = Vector(2);
    spec.w_in << 0.8436, 0.7381;
    spec.cloud = {10, 1100, 100, 42, 0.5};
    spec.epsilons = {50, 100, 150, 200};
    return spec;
}

SweepResult synthetic_surface(const std::vector<double>& alphas,
                              const std::vector<double>& betas,
                              double (*f)(double, double))
{
    SweepResult r;
    r.alphas = alphas;
    r.betas = betas;
    for (double a : alphas)
        for (double b : betas) {
            SweepCell c;
            c.alpha = a;
            c.beta = b;
            c.d_f = f(a, b);
            c.r_squared = 1.0;
            r.cells.push_back(c);
        }
    return r;
}

}  // namespace

TEST_CASE("spearman: monotone, constant, and tied data")
{
    const std::vector<double> x = {1, 2, 3, 4, 5};
    const std::vector<double> up = {0.1, 0.4, 0.5, 0.8, 0.9};
    const std::vector<double> down = {5, 4, 3, 1, 0};
    CHECK(spearman(x, up) == doctest::Approx(1.0));
    CHECK(spearman(x, down) == doctest::Approx(-1.0));

    const std::vector<double> constant = {2, 2, 2, 2, 2};
    CHECK(spearman(x, constant) == 0.0);  // no trend

    // Non-monotone reference: ranks of y against 1..4 are (2,1,4,3).
    const std::vector<double> x4 = {1, 2, 3, 4};
    const std::vector<double> y4 = {10, 5, 30, 20};
    CHECK(spearman(x4, y4) == doctest::Approx(0.6).epsilon(1e-12));

    CHECK_THROWS_AS((void)spearman(x, x4), std::invalid_argument);
}

TEST_CASE("run_sweep: spec validation")
{
    SweepSpec spec = small_spec();
    spec.betas.clear();
    CHECK_THROWS_WITH_AS((void)run_sweep(spec), doctest::Contains("empty grid"),
                         std::invalid_argument);

    spec = small_spec();
    spec.alphas = {1.0, 0.5};
    CHECK_THROWS_AS((void)run_sweep(spec), std::invalid_argument);

    spec = small_spec();
    spec.cloud.steps = spec.cloud.washout;
    CHECK_THROWS_AS((void)run_sweep(spec), std::invalid_argument);
}

TEST_CASE("run_sweep: produces one finite cell per grid point, ordered")
{
    const SweepSpec spec = small_spec();
    const SweepResult r = run_sweep(spec);
    REQUIRE(r.cells.size() == 6);
    std::size_t idx = 0;
    for (double a : spec.alphas)
        for (double b : spec.betas) {
            const SweepCell& c = r.cells[idx++];
            CHECK(c.alpha == a);
            CHECK(c.beta == b);
            CHECK(c.error.empty());
            CHECK(std::isfinite(c.d_f));
            CHECK(c.d_f >= 0.0);
            CHECK(c.d_f <= 2.1);
        }
}

TEST_CASE("run_sweep: deterministic and worker-count independent")
{
    SweepSpec spec = small_spec();
    spec.threads = 1;
    const SweepResult a = run_sweep(spec);
    spec.threads = 3;
    const SweepResult b = run_sweep(spec);
    const SweepResult c = run_sweep(spec);
    REQUIRE(a.cells.size() == b.cells.size());
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
        CHECK(a.cells[i].d_f == b.cells[i].d_f);
        CHECK(a.cells[i].r_squared == b.cells[i].r_squared);
        CHECK(b.cells[i].d_f == c.cells[i].d_f);
    }
}

TEST_CASE("run_sweep: deleting a grid value changes no other cell")
{
    SweepSpec spec = small_spec();
    const SweepResult full = run_sweep(spec);

    spec.betas = {0.45, 1.2};  // drop the middle beta
    const SweepResult reduced = run_sweep(spec);

    CHECK(reduced.at(0, 0).d_f == full.at(0, 0).d_f);
    CHECK(reduced.at(0, 1).d_f == full.at(0, 2).d_f);
    CHECK(reduced.at(1, 0).d_f == full.at(1, 0).d_f);
    CHECK(reduced.at(1, 1).d_f == full.at(1, 2).d_f);
}

TEST_CASE("run_sweep: per-cell failures are recorded, not thrown")
{
    SweepSpec spec = small_spec();
    spec.epsilons = {64, 64};  // no two distinct resolutions: every fit fails
    const SweepResult r = run_sweep(spec);
    for (const auto& c : r.cells) {
        CHECK(!c.error.empty());
        CHECK(c.d_f == 0.0);
    }
}

TEST_CASE("run_sweep: optional SVM probe fills the cell extras")
{
    SweepSpec spec = small_spec();
    spec.alphas = {1.0};
    spec.betas = {0.45};
    SvmProbeParams probe;
    probe.kernel = {0.05, 2.0};
    probe.sample = 500;
    spec.svm = probe;

    const SweepResult r = run_sweep(spec);
    REQUIRE(r.cells.size() == 1);
    REQUIRE(r.cells[0].n_sv.has_value());
    REQUIRE(r.cells[0].train_accuracy.has_value());
    CHECK(*r.cells[0].n_sv > 0);
    CHECK(*r.cells[0].train_accuracy > 0.5);
}

TEST_CASE("run_sweep: sparse grid corner measures a near-zero dimension")
{
    // Low recurrent gain with a saturating input collapses the cloud onto
    // a few isolated clusters; the surface's low extreme sits near 0.2.
    SweepSpec spec = small_spec();
    spec.alphas = {0.4};
    spec.betas = {1.9, 2.0};
    spec.cloud = {100, 2000, 1000, 42, 0.5};
    spec.epsilons = default_epsilons();
    const SweepResult r = run_sweep(spec);
    for (const auto& c : r.cells) {
        CHECK(c.error.empty());
        CHECK(c.d_f >= 0.0);
        CHECK(c.d_f < 0.5);
    }
}

TEST_CASE("trend_report: exact monotone synthetic surface")
{
    const SweepResult r = synthetic_surface(
        {0.4, 0.6, 0.8, 1.0}, {0.5, 1.0, 1.5, 2.0},
        [](double, double b) { return 2.0 - b / 2.0; });
    const TrendReport tr = trend_report(r);
    REQUIRE(tr.df_vs_beta.size() == 4);
    for (const auto& t : tr.df_vs_beta) CHECK(t.rho == doctest::Approx(-1.0));
    // Constant along alpha: no trend in the columns.
    for (const auto& t : tr.df_vs_alpha) CHECK(t.rho == 0.0);
}

TEST_CASE("trend_report: constant surface reports no trend")
{
    const SweepResult r = synthetic_surface({0.4, 0.6}, {0.5, 1.0, 1.5},
                                            [](double, double) { return 1.0; });
    const TrendReport tr = trend_report(r);
    for (const auto& t : tr.df_vs_beta) CHECK(t.rho == 0.0);
    for (const auto& t : tr.df_vs_alpha) CHECK(t.rho == 0.0);
}

TEST_CASE("trend_report: beta_min restricts the row correlations")
{
    // Rises until beta = 0.4, falls beyond it; the full row has no clean
    // trend but the restricted row is exactly monotone.
    const SweepResult r = synthetic_surface(
        {1.0, 1.5}, {0.2, 0.45, 0.9, 1.35, 1.8}, [](double, double b) {
            return b < 0.4 ? b : 2.0 - b;
        });
    const TrendReport full = trend_report(r, 0.0);
    const TrendReport tail = trend_report(r, 0.45);
    CHECK(tail.df_vs_beta[0].n == 4);
    CHECK(tail.df_vs_beta[0].rho == doctest::Approx(-1.0));
    CHECK(full.df_vs_beta[0].n == 5);
    CHECK(full.df_vs_beta[0].rho > -1.0);
}

TEST_CASE("trend_report: insufficient cells is an error")
{
    const SweepResult r =
        synthetic_surface({1.0}, {0.5}, [](double, double) { return 1.0; });
    CHECK_THROWS_AS((void)trend_report(r), std::invalid_argument);
}
