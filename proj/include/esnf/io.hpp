#pragma once

#include "esnf/arith.hpp"
#include "esnf/fractal.hpp"
#include "esnf/reservoir.hpp"
#include "esnf/svm.hpp"
#include "esnf/sweep.hpp"

#include <string>

namespace esnf::io {

/// Doubles are printed with 17 significant digits so CSV output
/// round-trips bit-exactly.
std::string format_double(double v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// Reservoir configuration plus generation budget, as accepted by the
/// `cloud` command. Keys: W (row-major array of arrays) or
/// W_rotation {angle, scale}, w_in, alpha, beta, seed, n_sequences,
/// steps, washout; optional p_plus, normalize_W, normalize_w_in.
struct CloudJob {
    ReservoirConfig cfg;
    std::size_t n_sequences = 0;
    std::size_t steps = 0;
    std::size_t washout = 0;
    std::uint64_t seed = 0;
    double p_plus = 0.5;
};

CloudJob parse_cloud_job(const std::string& json_text);

/// StateCloud CSV: header `x1,...,xm,label`, one row per point.
std::string cloud_to_csv(const StateCloud& cloud);
StateCloud cloud_from_csv(const std::string& csv_text);

/// Box-count report CSV: `epsilon,occupied` rows plus a summary line.
std::string fd_report_csv(const FdEstimate& fd);

/// FdEstimate JSON: {"slope", "intercept", "r2", "samples": [...]}.
std::string fd_to_json(const FdEstimate& fd);

/// SymbolModel JSON: {"symbols": [...], "probs": [...]}; symbol entries
/// may be strings or numbers.
SymbolModel parse_symbol_model(const std::string& json_text);

/// Model summary JSON: {"n_sv", "bias", "train_accuracy"}.
std::string svm_summary_json(const SvmModel& model);

SweepSpec parse_sweep_spec(const std::string& json_text);

/// Sweep CSV: header `alpha,beta,d_f,r2,n_sv,train_accuracy,error`.
std::string sweep_to_csv(const SweepResult& result);
SweepResult sweep_from_csv(const std::string& csv_text);

}  // namespace esnf::io
