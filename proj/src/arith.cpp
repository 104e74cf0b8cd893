#include "esnf/arith.hpp"
#include "esnf/rng.hpp"
#include "digest.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace esnf {

namespace {

void require(bool cond, const std::string& msg)
{
    if (!cond) throw std::invalid_argument(msg);
}

constexpr double kProbSumTol = 1e-12;

}  // namespace

SymbolModel SymbolModel::make(std::vector<std::string> symbols,
                              std::vector<double> probs)
{
    require(!symbols.empty(), "symbol model: empty alphabet");
    require(symbols.size() == probs.size(),
            "symbol model: symbols and probs differ in length");

    double sum = 0.0;
    for (double p : probs) {
        require(std::isfinite(p) && p > 0.0,
                "symbol model: probabilities must be positive");
        sum += p;
    }
    require(std::abs(sum - 1.0) <= kProbSumTol,
            "symbol model: probabilities must sum to 1");

    for (std::size_t i = 0; i < symbols.size(); ++i)
        for (std::size_t j = i + 1; j < symbols.size(); ++j)
            require(symbols[i] != symbols[j], "symbol model: duplicate symbol");

    SymbolModel m;
    m.symbols = std::move(symbols);
    m.probs = std::move(probs);
    m.cum.resize(m.probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < m.probs.size(); ++i) {
        m.cum[i] = acc;
        acc += m.probs[i];
    }
    return m;
}

SymbolModel SymbolModel::uniform(std::vector<std::string> symbols)
{
    const std::size_t n = symbols.size();
    require(n > 0, "symbol model: empty alphabet");
    return make(std::move(symbols),
                std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

SymbolModel SymbolModel::binary_uniform()
{
    return make({"-1", "+1"}, {0.5, 0.5});
}

int SymbolModel::index_of(std::string_view token) const
{
    for (std::size_t i = 0; i < symbols.size(); ++i)
        if (symbols[i] == token) return static_cast<int>(i);
    return -1;
}

namespace {

inline EncoderState step_idx(EncoderState s, std::size_t i, const SymbolModel& m)
{
    s.x = m.probs[i] * s.x + m.cum[i];
    s.width *= m.probs[i];
    ++s.t;
    return s;
}

}  // namespace

EncoderState encode_step(EncoderState state, std::string_view u,
                         const SymbolModel& model)
{
    const int i = model.index_of(u);
    if (i < 0)
        throw std::invalid_argument("encode: unknown symbol '" + std::string(u) +
                                    "'");
    return step_idx(state, static_cast<std::size_t>(i), model);
}

EncoderState encode(const std::vector<std::string>& seq, const SymbolModel& model,
                    double a)
{
    require(a >= 0.0 && a <= 1.0, "encode: initial value must lie in [0, 1]");
    EncoderState s;
    s.x = a;
    for (const auto& u : seq) s = encode_step(s, u, model);
    return s;
}

std::pair<double, double> interval(const std::vector<std::string>& seq,
                                   const SymbolModel& model)
{
    require(!seq.empty(), "interval: empty sequence");
    return {encode(seq, model, 0.0).x, encode(seq, model, 1.0).x};
}

std::vector<std::string> decode(double x, std::size_t T, const SymbolModel& model)
{
    require(x >= 0.0 && x < 1.0, "decode: x must lie in [0, 1)");

    std::vector<std::string> out;
    out.reserve(T);
    for (std::size_t t = 0; t < T; ++t) {
        // Largest i with g(k_i) <= x; cum is strictly increasing.
        auto it = std::upper_bound(model.cum.begin(), model.cum.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - model.cum.begin()) - 1;
        out.push_back(model.symbols[i]);
        x = (x - model.cum[i]) / model.probs[i];
        x = std::clamp(x, 0.0, std::nextafter(1.0, 0.0));
    }
    std::reverse(out.begin(), out.end());
    return out;
}

double code_length_bits(const std::vector<std::string>& seq,
                        const SymbolModel& model)
{
    require(!seq.empty(), "code length: empty sequence");
    double bits = 0.0;
    for (const auto& u : seq) {
        const int i = model.index_of(u);
        if (i < 0)
            throw std::invalid_argument("code length: unknown symbol '" + u + "'");
        bits -= std::log2(model.probs[static_cast<std::size_t>(i)]);
    }
    return bits;
}

std::string transmitted_digits(double x_minus, double width)
{
    require(width > 0.0 && width <= 1.0, "transmit: width must lie in (0, 1]");
    require(x_minus >= 0.0 && x_minus < 1.0, "transmit: x must lie in [0, 1)");

    const int n_bits = static_cast<int>(std::ceil(-std::log2(width))) + 1;
    double mid = x_minus + width / 2.0;
    std::string out;
    out.reserve(static_cast<std::size_t>(n_bits));
    for (int k = 0; k < n_bits; ++k) {
        mid *= 2.0;
        if (mid >= 1.0) {
            out.push_back('1');
            mid -= 1.0;
        } else {
            out.push_back('0');
        }
    }
    return out;
}

StateCloud mismatch_cloud(const SymbolModel& true_model,
                          const SymbolModel& assumed_model, std::size_t n,
                          std::size_t T, std::uint64_t seed)
{
    // Map the source alphabet into the coding alphabet up front.
    std::vector<std::size_t> remap(true_model.size());
    for (std::size_t i = 0; i < true_model.size(); ++i) {
        const int j = assumed_model.index_of(true_model.symbols[i]);
        if (j < 0)
            throw std::invalid_argument("mismatch cloud: symbol '" +
                                        true_model.symbols[i] +
                                        "' missing from assumed model");
        remap[i] = static_cast<std::size_t>(j);
    }

    StateCloud cloud;
    cloud.dim = 1;
    {
        detail::Fnv1a h;
        for (std::size_t i = 0; i < true_model.size(); ++i) {
            h.absorb_str(true_model.symbols[i]);
            h.absorb_d(true_model.probs[i]);
        }
        for (std::size_t i = 0; i < assumed_model.size(); ++i) {
            h.absorb_str(assumed_model.symbols[i]);
            h.absorb_d(assumed_model.probs[i]);
        }
        h.absorb_u64(n);
        h.absorb_u64(T);
        h.absorb_u64(seed);
        cloud.config_digest = h.hex();
    }
    cloud.coords.reserve(n);
    cloud.labels.reserve(n);

    for (std::size_t s = 0; s < n; ++s) {
        SplitMix64 rng(substream_seed(seed, s));
        EncoderState enc;
        std::size_t last = 0;
        for (std::size_t t = 0; t < T; ++t) {
            const double r = rng.next_u01();
            // Inverse CDF draw from the source model.
            std::size_t i = true_model.size() - 1;
            for (std::size_t k = 0; k + 1 < true_model.size(); ++k) {
                if (r < true_model.cum[k] + true_model.probs[k]) {
                    i = k;
                    break;
                }
            }
            last = i;
            enc = step_idx(enc, remap[i], assumed_model);
        }
        cloud.coords.push_back(enc.x);
        cloud.labels.push_back(last == 0 ? std::int8_t{-1} : std::int8_t{1});
    }
    return cloud;
}

std::vector<std::string> to_tokens(const InputSequence& seq)
{
    std::vector<std::string> out;
    out.reserve(seq.length());
    for (std::int8_t u : seq.symbols) out.emplace_back(u > 0 ? "+1" : "-1");
    return out;
}

}  // namespace esnf
