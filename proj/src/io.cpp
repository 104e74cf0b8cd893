#include "esnf/io.hpp"

#include <nlohmann/json.hpp>

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace esnf::io {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

double parse_double(const std::string& field, const char* what)
{
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end == field.c_str() || errno == ERANGE)
        fail(std::string("malformed ") + what + ": '" + field + "'");
    return v;
}

std::vector<std::string> split(const std::string& line, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<std::string> lines_of(const std::string& text)
{
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        if (ch == '\n') {
            if (!cur.empty() && cur.back() == '\r') cur.pop_back();
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

Matrix parse_matrix(const json& j, const char* key)
{
    if (!j.is_array() || j.empty()) fail(std::string(key) + " must be a non-empty array of arrays");
    const std::size_t rows = j.size();
    const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
    if (cols == 0) fail(std::string(key) + " must be a non-empty array of arrays");
    Matrix M(static_cast<int>(rows), static_cast<int>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols)
            fail(std::string(key) + " rows must all have the same length");
        for (std::size_t c = 0; c < cols; ++c)
            M(static_cast<int>(r), static_cast<int>(c)) = j[r][c].get<double>();
    }
    return M;
}

Vector parse_vector(const json& j, const char* key)
{
    if (!j.is_array() || j.empty()) fail(std::string(key) + " must be a non-empty array");
    Vector v(static_cast<int>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<int>(i)) = j[i].get<double>();
    return v;
}

}  // namespace

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("file not found: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail("cannot open for writing: " + path);
    out << content;
    if (!out) fail("write failed: " + path);
}

CloudJob parse_cloud_job(const std::string& json_text)
{
    json j = json::parse(json_text);
    CloudJob job;

    if (j.contains("W")) {
        job.cfg.W = parse_matrix(j.at("W"), "W");
    } else if (j.contains("W_rotation")) {
        const auto& r = j.at("W_rotation");
        job.cfg.W = rotation_scaled(r.at("angle").get<double>(),
                                    r.at("scale").get<double>());
    } else {
        fail("config needs W or W_rotation");
    }
    job.cfg.w_in = parse_vector(j.at("w_in"), "w_in");
    job.cfg.alpha = j.at("alpha").get<double>();
    job.cfg.beta = j.at("beta").get<double>();

    if (j.value("normalize_W", false)) job.cfg.W = normalize_spectral(job.cfg.W);
    if (j.value("normalize_w_in", false))
        job.cfg.w_in = normalize_spectral(job.cfg.w_in);

    job.seed = j.at("seed").get<std::uint64_t>();
    job.n_sequences = j.at("n_sequences").get<std::size_t>();
    job.steps = j.at("steps").get<std::size_t>();
    job.washout = j.value("washout", std::size_t{1000});
    job.p_plus = j.value("p_plus", 0.5);

    job.cfg.validate();
    return job;
}

std::string cloud_to_csv(const StateCloud& cloud)
{
    std::string out;
    for (int d = 0; d < cloud.dim; ++d) {
        out += "x" + std::to_string(d + 1);
        out += ',';
    }
    out += "label\n";
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        for (int d = 0; d < cloud.dim; ++d) {
            out += format_double(cloud.coord(i, d));
            out += ',';
        }
        out += cloud.labels[i] > 0 ? "1" : "-1";
        out += '\n';
    }
    return out;
}

StateCloud cloud_from_csv(const std::string& csv_text)
{
    const auto lines = lines_of(csv_text);
    if (lines.empty()) fail("cloud csv: empty file");

    const auto header = split(lines[0], ',');
    if (header.size() < 2 || header.back() != "label")
        fail("cloud csv: expected header x1,...,xm,label");
    const int dim = static_cast<int>(header.size()) - 1;

    StateCloud cloud;
    cloud.dim = dim;
    cloud.coords.reserve((lines.size() - 1) * static_cast<std::size_t>(dim));
    cloud.labels.reserve(lines.size() - 1);

    for (std::size_t ln = 1; ln < lines.size(); ++ln) {
        if (lines[ln].empty()) continue;
        const auto fields = split(lines[ln], ',');
        if (static_cast<int>(fields.size()) != dim + 1)
            fail("cloud csv: row " + std::to_string(ln) + " has " +
                 std::to_string(fields.size()) + " fields, expected " +
                 std::to_string(dim + 1));
        for (int d = 0; d < dim; ++d)
            cloud.coords.push_back(parse_double(fields[static_cast<std::size_t>(d)],
                                                "coordinate"));
        const double lab = parse_double(fields.back(), "label");
        if (lab != 1.0 && lab != -1.0)
            fail("cloud csv: label must be -1 or 1 on row " + std::to_string(ln));
        cloud.labels.push_back(lab > 0 ? std::int8_t{1} : std::int8_t{-1});
    }
    return cloud;
}

std::string fd_report_csv(const FdEstimate& fd)
{
    std::string out = "epsilon,occupied\n";
    for (const auto& s : fd.samples) {
        out += std::to_string(s.epsilon);
        out += ',';
        out += std::to_string(s.occupied);
        out += '\n';
    }
    out += "# slope=" + format_double(fd.slope) +
           ",intercept=" + format_double(fd.intercept) +
           ",r2=" + format_double(fd.r_squared) + "\n";
    return out;
}

std::string fd_to_json(const FdEstimate& fd)
{
    json samples = json::array();
    for (const auto& s : fd.samples)
        samples.push_back({{"epsilon", s.epsilon}, {"occupied", s.occupied}});
    json j = {{"slope", fd.slope},
              {"intercept", fd.intercept},
              {"r2", fd.r_squared},
              {"samples", samples}};
    return j.dump(2) + "\n";
}

SymbolModel parse_symbol_model(const std::string& json_text)
{
    json j = json::parse(json_text);
    if (!j.contains("symbols") || !j.contains("probs"))
        fail("symbol model needs 'symbols' and 'probs'");

    std::vector<std::string> symbols;
    for (const auto& s : j.at("symbols")) {
        if (s.is_string())
            symbols.push_back(s.get<std::string>());
        else
            symbols.push_back(s.dump());  // numeric tokens keep their spelling
    }
    std::vector<double> probs;
    for (const auto& p : j.at("probs")) probs.push_back(p.get<double>());

    return SymbolModel::make(std::move(symbols), std::move(probs));
}

std::string svm_summary_json(const SvmModel& model)
{
    json j = {{"n_sv", model.sv_count()},
              {"bias", model.bias},
              {"train_accuracy", model.train_accuracy}};
    return j.dump(2) + "\n";
}

SweepSpec parse_sweep_spec(const std::string& json_text)
{
    json j = json::parse(json_text);
    SweepSpec spec;

    for (const auto& a : j.at("alphas")) spec.alphas.push_back(a.get<double>());
    for (const auto& b : j.at("betas")) spec.betas.push_back(b.get<double>());
    spec.W = parse_matrix(j.at("W"), "W");
    spec.w_in = parse_vector(j.at("w_in"), "w_in");

    const auto& c = j.at("cloud");
    spec.cloud.n_sequences = c.at("n_sequences").get<std::size_t>();
    spec.cloud.steps = c.at("steps").get<std::size_t>();
    spec.cloud.washout = c.at("washout").get<std::size_t>();
    spec.cloud.seed = c.at("seed").get<std::uint64_t>();
    spec.cloud.p_plus = c.value("p_plus", 0.5);

    if (j.contains("epsilons"))
        for (const auto& e : j.at("epsilons")) spec.epsilons.push_back(e.get<int>());
    else
        spec.epsilons = default_epsilons();

    if (j.contains("svm")) {
        const auto& s = j.at("svm");
        SvmProbeParams probe;
        probe.kernel.sigma = s.at("sigma").get<double>();
        probe.kernel.c = s.at("c").get<double>();
        probe.sample = s.value("sample", std::size_t{3000});
        probe.train.tol = s.value("tol", 1e-3);
        spec.svm = probe;
    }
    spec.threads = j.value("threads", 0);

    spec.validate();
    return spec;
}

std::string sweep_to_csv(const SweepResult& result)
{
    std::string out = "alpha,beta,d_f,r2,n_sv,train_accuracy,error\n";
    for (const auto& c : result.cells) {
        out += format_double(c.alpha);
        out += ',';
        out += format_double(c.beta);
        out += ',';
        out += format_double(c.d_f);
        out += ',';
        out += format_double(c.r_squared);
        out += ',';
        if (c.n_sv) out += std::to_string(*c.n_sv);
        out += ',';
        if (c.train_accuracy) out += format_double(*c.train_accuracy);
        out += ',';
        out += c.error;  // error text carries no commas (single what() line)
        out += '\n';
    }
    return out;
}

SweepResult sweep_from_csv(const std::string& csv_text)
{
    const auto lines = lines_of(csv_text);
    if (lines.empty() || split(lines[0], ',').size() != 7)
        fail("sweep csv: expected header alpha,beta,d_f,r2,n_sv,train_accuracy,error");

    SweepResult result;
    std::map<double, std::size_t> alpha_ix, beta_ix;
    std::vector<SweepCell> cells;

    for (std::size_t ln = 1; ln < lines.size(); ++ln) {
        if (lines[ln].empty()) continue;
        const auto f = split(lines[ln], ',');
        if (f.size() != 7) fail("sweep csv: malformed row " + std::to_string(ln));
        SweepCell c;
        c.alpha = parse_double(f[0], "alpha");
        c.beta = parse_double(f[1], "beta");
        c.d_f = parse_double(f[2], "d_f");
        c.r_squared = parse_double(f[3], "r2");
        if (!f[4].empty()) c.n_sv = static_cast<std::size_t>(std::stoull(f[4]));
        if (!f[5].empty()) c.train_accuracy = parse_double(f[5], "train_accuracy");
        c.error = f[6];
        alpha_ix.emplace(c.alpha, 0);
        beta_ix.emplace(c.beta, 0);
        cells.push_back(std::move(c));
    }
    if (cells.empty()) fail("sweep csv: no cells");

    std::size_t k = 0;
    for (auto& [v, ix] : alpha_ix) {
        ix = k++;
        result.alphas.push_back(v);
    }
    k = 0;
    for (auto& [v, ix] : beta_ix) {
        ix = k++;
        result.betas.push_back(v);
    }

    if (cells.size() != result.alphas.size() * result.betas.size())
        fail("sweep csv: ragged grid");
    result.cells.resize(cells.size());
    std::vector<bool> seen(cells.size(), false);
    for (auto& c : cells) {
        const std::size_t idx =
            alpha_ix.at(c.alpha) * result.betas.size() + beta_ix.at(c.beta);
        if (seen[idx]) fail("sweep csv: duplicate cell");
        seen[idx] = true;
        result.cells[idx] = std::move(c);
    }
    return result;
}

}  // namespace esnf::io
