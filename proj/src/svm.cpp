#include "esnf/svm.hpp"
#include "esnf/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

namespace esnf {

namespace {

void require(bool cond, const std::string& msg)
{
    if (!cond) throw std::invalid_argument(msg);
}

constexpr double kSvThreshold = 1e-8;
constexpr double kStepEps = 1e-12;

inline double sq_dist(const double* a, const double* b, int dim)
{
    double s = 0.0;
    for (int d = 0; d < dim; ++d) {
        const double diff = a[d] - b[d];
        s += diff * diff;
    }
    return s;
}

// SMO working set: caches the Gram matrix when it fits, and keeps the
// prediction errors E_i = f(x_i) - y_i current after every step.
class Smo {
public:
    Smo(const LabeledSet& data, const KernelParams& params,
        const SvmTrainOptions& opts)
        : data_(data),
          params_(params),
          opts_(opts),
          n_(data.size()),
          alpha_(data.size(), 0.0),
          errors_(data.size()),
          rng_(opts.seed)
    {
        const double inv = 1.0 / (2.0 * params.sigma * params.sigma);
        gamma_ = inv;
        if (n_ <= 4096) {
            gram_.resize(n_ * n_);
            for (std::size_t i = 0; i < n_; ++i) {
                gram_[i * n_ + i] = 1.0;
                for (std::size_t j = i + 1; j < n_; ++j) {
                    const double k = std::exp(
                        -gamma_ * sq_dist(data_.point_data(i), data_.point_data(j),
                                          data_.dim));
                    gram_[i * n_ + j] = k;
                    gram_[j * n_ + i] = k;
                }
            }
        }
        // All alphas start at zero, so f(x_i) = 0 and E_i = -y_i.
        for (std::size_t i = 0; i < n_; ++i)
            errors_[i] = -static_cast<double>(data_.labels[i]);
    }

    void solve()
    {
        std::size_t sweeps = 0;
        std::size_t stalled = 0;
        bool examine_all = true;
        while (true) {
            if (++sweeps > opts_.max_sweeps)
                fail("sweep cap reached", sweeps);

            std::size_t violations = 0;
            std::size_t changed = 0;
            for (std::size_t i = 0; i < n_; ++i) {
                if (!examine_all && !is_free(alpha_[i])) continue;
                if (!violates_kkt(i)) continue;
                ++violations;
                if (examine(i)) ++changed;
            }

            if (examine_all) {
                if (violations == 0) {
                    // Convergence is declared against the reported bias, so
                    // recenter first and keep going if that uncovers work.
                    recenter_bias();
                    bool any = false;
                    for (std::size_t i = 0; i < n_ && !any; ++i)
                        any = violates_kkt(i);
                    if (!any) return;
                    continue;
                }
                if (changed == 0) {
                    // The pairwise steps may be exhausted while a stale bias
                    // still flags bound points; recentering b from the
                    // current duals clears such phantom violations.
                    recenter_bias();
                    bool any = false;
                    for (std::size_t i = 0; i < n_ && !any; ++i)
                        any = violates_kkt(i);
                    if (!any) return;
                    if (++stalled >= opts_.max_stalled_sweeps)
                        fail("no progress", sweeps);
                } else {
                    stalled = 0;
                }
                if (changed > 0) examine_all = false;
            } else {
                if (changed == 0)
                    examine_all = true;  // re-check the bound points
            }
        }
    }

    const std::vector<double>& alphas() const { return alpha_; }
    double bias() const { return b_; }

    double decision(std::size_t i) const
    {
        return errors_[i] + static_cast<double>(data_.labels[i]);
    }

private:
    [[noreturn]] void fail(const char* why, std::size_t sweeps) const
    {
        std::size_t remaining = 0;
        std::string sample;
        for (std::size_t i = 0; i < n_; ++i) {
            if (!violates_kkt(i)) continue;
            if (remaining == 0) {
                char buf[128];
                std::snprintf(buf, sizeof buf,
                              "; first violator i=%zu y=%d alpha=%.6g E=%.6g",
                              i, static_cast<int>(data_.labels[i]), alpha_[i],
                              errors_[i]);
                sample = buf;
            }
            ++remaining;
        }
        throw std::runtime_error(
            "svm train: did not converge (" + std::string(why) + " after " +
            std::to_string(sweeps) + " sweeps, " + std::to_string(remaining) +
            " KKT violations remain, tol=" + std::to_string(opts_.tol) + sample +
            ")");
    }

    bool is_free(double a) const
    {
        return a > kSvThreshold && a < params_.c - kSvThreshold;
    }

    // Places b inside the interval permitted by the box constraints: the
    // mean over free vectors when any exist, otherwise the midpoint of the
    // feasible bracket. Every candidate bias is b - E_i.
    void recenter_bias()
    {
        double lo = -std::numeric_limits<double>::infinity();
        double hi = std::numeric_limits<double>::infinity();
        double free_sum = 0.0;
        std::size_t free_n = 0;
        for (std::size_t i = 0; i < n_; ++i) {
            const double candidate = b_ - errors_[i];
            if (is_free(alpha_[i])) {
                free_sum += candidate;
                ++free_n;
                continue;
            }
            const bool at_zero = alpha_[i] <= kSvThreshold;
            const bool wants_lower =
                (data_.labels[i] == 1) == at_zero;  // b >= candidate
            if (wants_lower)
                lo = std::max(lo, candidate);
            else
                hi = std::min(hi, candidate);
        }
        double b_new;
        if (free_n > 0)
            b_new = free_sum / static_cast<double>(free_n);
        else if (std::isfinite(lo) && std::isfinite(hi))
            b_new = 0.5 * (lo + hi);
        else if (std::isfinite(lo))
            b_new = lo;
        else if (std::isfinite(hi))
            b_new = hi;
        else
            return;
        const double db = b_new - b_;
        if (db == 0.0) return;
        b_ = b_new;
        for (std::size_t k = 0; k < n_; ++k) errors_[k] += db;
    }

    bool violates_kkt(std::size_t i) const
    {
        const double yi = static_cast<double>(data_.labels[i]);
        const double r = yi * errors_[i];
        return (r < -opts_.tol && alpha_[i] < params_.c - kSvThreshold) ||
               (r > opts_.tol && alpha_[i] > kSvThreshold);
    }

    double kernel(std::size_t i, std::size_t j) const
    {
        if (!gram_.empty()) return gram_[i * n_ + j];
        if (i == j) return 1.0;
        return std::exp(-gamma_ *
                        sq_dist(data_.point_data(i), data_.point_data(j), data_.dim));
    }

    bool examine(std::size_t i)
    {
        // Best second index first: maximize |E_i - E_j| over free points.
        const double ei = errors_[i];
        std::size_t best = n_;
        double best_gap = 0.0;
        for (std::size_t j = 0; j < n_; ++j) {
            if (j == i || !is_free(alpha_[j])) continue;
            const double gap = std::abs(ei - errors_[j]);
            if (gap > best_gap) {
                best_gap = gap;
                best = j;
            }
        }
        if (best < n_ && take_step(i, best)) return true;

        // Fallback scans start at a seeded random offset.
        const std::size_t start = static_cast<std::size_t>(rng_.next() % n_);
        for (std::size_t k = 0; k < n_; ++k) {
            const std::size_t j = (start + k) % n_;
            if (j == i || !is_free(alpha_[j])) continue;
            if (take_step(i, j)) return true;
        }
        for (std::size_t k = 0; k < n_; ++k) {
            const std::size_t j = (start + k) % n_;
            if (j == i) continue;
            if (take_step(i, j)) return true;
        }
        return false;
    }

    bool take_step(std::size_t i, std::size_t j)
    {
        const double yi = static_cast<double>(data_.labels[i]);
        const double yj = static_cast<double>(data_.labels[j]);
        const double ai = alpha_[i], aj = alpha_[j];
        const double c = params_.c;
        const double s = yi * yj;

        double lo, hi;
        if (yi != yj) {
            lo = std::max(0.0, aj - ai);
            hi = std::min(c, c + aj - ai);
        } else {
            lo = std::max(0.0, ai + aj - c);
            hi = std::min(c, ai + aj);
        }
        if (lo >= hi) return false;

        const double kii = kernel(i, i);
        const double kjj = kernel(j, j);
        const double kij = kernel(i, j);
        const double eta = kii + kjj - 2.0 * kij;

        double aj_new;
        if (eta > 0.0) {
            aj_new = aj + yj * (errors_[i] - errors_[j]) / eta;
            aj_new = std::clamp(aj_new, lo, hi);
        } else {
            // Degenerate curvature (duplicate points). Along the feasible
            // segment the dual objective is  slope*(t - aj) - eta/2*(t - aj)^2
            // with slope = yj*(Ei - Ej); pick the better endpoint.
            const double slope = yj * (errors_[i] - errors_[j]);
            const double d_lo = slope * (lo - aj) - 0.5 * eta * (lo - aj) * (lo - aj);
            const double d_hi = slope * (hi - aj) - 0.5 * eta * (hi - aj) * (hi - aj);
            if (d_lo > d_hi + kStepEps && d_lo > kStepEps)
                aj_new = lo;
            else if (d_hi > d_lo + kStepEps && d_hi > kStepEps)
                aj_new = hi;
            else
                return false;
        }

        if (std::abs(aj_new - aj) < kStepEps * (aj_new + aj + kStepEps))
            return false;

        // Snap onto the box so rounding residue cannot linger just inside
        // a bound as a phantom KKT violation.
        constexpr double kBoundSnap = 1e-12;
        if (aj_new < kBoundSnap)
            aj_new = 0.0;
        else if (aj_new > c - kBoundSnap)
            aj_new = c;
        double ai_new = ai + s * (aj - aj_new);
        if (ai_new < kBoundSnap)
            ai_new = 0.0;
        else if (ai_new > c - kBoundSnap)
            ai_new = c;
        const double di = yi * (ai_new - ai);
        const double dj = yj * (aj_new - aj);

        const double b_old = b_;
        const double b1 = b_ - errors_[i] - di * kii - dj * kij;
        const double b2 = b_ - errors_[j] - di * kij - dj * kjj;
        if (ai_new > kSvThreshold && ai_new < c - kSvThreshold)
            b_ = b1;
        else if (aj_new > kSvThreshold && aj_new < c - kSvThreshold)
            b_ = b2;
        else
            b_ = 0.5 * (b1 + b2);

        alpha_[i] = ai_new;
        alpha_[j] = aj_new;

        const double db = b_ - b_old;
        for (std::size_t k = 0; k < n_; ++k)
            errors_[k] += di * kernel(i, k) + dj * kernel(j, k) + db;
        return true;
    }

    const LabeledSet& data_;
    KernelParams params_;
    SvmTrainOptions opts_;
    std::size_t n_;
    double gamma_ = 0.0;
    std::vector<double> gram_;
    std::vector<double> alpha_;
    std::vector<double> errors_;
    double b_ = 0.0;
    SplitMix64 rng_;
};

}  // namespace

void KernelParams::validate() const
{
    require(std::isfinite(sigma) && sigma > 0.0, "kernel: sigma must be > 0");
    require(std::isfinite(c) && c > 0.0, "kernel: C must be > 0");
}

void LabeledSet::push(const Vector& p, std::int8_t label)
{
    if (dim == 0) dim = static_cast<int>(p.size());
    require(static_cast<int>(p.size()) == dim, "labeled set: dimension mismatch");
    require(label == 1 || label == -1, "labeled set: label must be -1 or +1");
    points.insert(points.end(), p.data(), p.data() + p.size());
    labels.push_back(label);
}

LabeledSet LabeledSet::from_cloud(const StateCloud& cloud, std::size_t max_points)
{
    LabeledSet set;
    set.dim = cloud.dim;
    const std::size_t n = cloud.size();
    if (n == 0) return set;

    std::size_t stride = 1;
    if (max_points > 0 && n > max_points) stride = (n + max_points - 1) / max_points;

    for (std::size_t i = 0; i < n; i += stride) {
        const double* p = cloud.point_data(i);
        set.points.insert(set.points.end(), p, p + cloud.dim);
        set.labels.push_back(cloud.labels[i]);
    }
    return set;
}

double rbf_kernel(const Vector& a, const Vector& b, double sigma)
{
    require(a.size() == b.size(), "rbf kernel: dimension mismatch");
    require(sigma > 0.0, "rbf kernel: sigma must be > 0");
    const double d2 = (a - b).squaredNorm();
    return std::exp(-d2 / (2.0 * sigma * sigma));
}

SvmModel train(const LabeledSet& data, const KernelParams& params,
               const SvmTrainOptions& opts)
{
    params.validate();
    require(data.size() >= 2, "svm train: need at least 2 points");
    bool has_pos = false, has_neg = false;
    for (std::int8_t y : data.labels) {
        has_pos |= (y == 1);
        has_neg |= (y == -1);
    }
    require(has_pos && has_neg, "svm train: degenerate labels");

    Smo smo(data, params, opts);
    smo.solve();

    SvmModel model;
    model.dim = data.dim;
    model.params = params;
    model.bias = smo.bias();

    const auto& alpha = smo.alphas();
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (alpha[i] <= kSvThreshold) continue;
        const double* p = data.point_data(i);
        model.support_vectors.insert(model.support_vectors.end(), p, p + data.dim);
        model.dual_coefs.push_back(alpha[i] * static_cast<double>(data.labels[i]));
    }

    std::size_t correct = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const int pred = smo.decision(i) >= 0.0 ? 1 : -1;
        if (pred == data.labels[i]) ++correct;
    }
    model.train_accuracy =
        static_cast<double>(correct) / static_cast<double>(data.size());
    return model;
}

double decision_value(const SvmModel& model, const Vector& x)
{
    require(static_cast<int>(x.size()) == model.dim,
            "svm predict: dimension mismatch");
    const double gamma = 1.0 / (2.0 * model.params.sigma * model.params.sigma);
    double f = model.bias;
    for (std::size_t i = 0; i < model.sv_count(); ++i) {
        const double d2 =
            sq_dist(model.support_vectors.data() + i * model.dim, x.data(), model.dim);
        f += model.dual_coefs[i] * std::exp(-gamma * d2);
    }
    return f;
}

int predict(const SvmModel& model, const Vector& x)
{
    return decision_value(model, x) >= 0.0 ? 1 : -1;
}

std::size_t sv_count(const SvmModel& model) { return model.sv_count(); }

double dual_objective(const SvmModel& model)
{
    const double gamma = 1.0 / (2.0 * model.params.sigma * model.params.sigma);
    const std::size_t n = model.sv_count();
    double obj = 0.0;
    for (std::size_t i = 0; i < n; ++i) obj += std::abs(model.dual_coefs[i]);
    for (std::size_t i = 0; i < n; ++i) {
        obj -= 0.5 * model.dual_coefs[i] * model.dual_coefs[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            const double k = std::exp(
                -gamma * sq_dist(model.support_vectors.data() + i * model.dim,
                                 model.support_vectors.data() + j * model.dim,
                                 model.dim));
            obj -= model.dual_coefs[i] * model.dual_coefs[j] * k;
        }
    }
    return obj;
}

}  // namespace esnf
