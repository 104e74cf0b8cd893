#pragma once

#include "esnf/reservoir.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace esnf {

/// Ordered symbol alphabet with probabilities p(k_i) and cumulative
/// offsets g(k_i) = sum_{j<i} p(k_j). Probabilities must be positive and
/// sum to 1 within 1e-12.
struct SymbolModel {
    std::vector<std::string> symbols;
    std::vector<double> probs;
    std::vector<double> cum;

    static SymbolModel make(std::vector<std::string> symbols,
                            std::vector<double> probs);
    static SymbolModel uniform(std::vector<std::string> symbols);
    /// The binary input alphabet in interval order (-1, +1).
    static SymbolModel binary_uniform();

    std::size_t size() const { return symbols.size(); }
    /// Index of a token, or -1 if the token is not in the alphabet.
    int index_of(std::string_view token) const;
};

/// Running state of the encoder recursion x' = p(u) * x + g(u).
/// width tracks the exact interval width, the product of consumed symbol
/// probabilities; the two-pass interval() construction cross-checks it.
struct EncoderState {
    double x = 0.0;      ///< in [0, 1]; stays in [0,1) when started below 1
    double width = 1.0;  ///< in (0, 1]
    std::size_t t = 0;   ///< symbols consumed
};

/// One encoder update. Unknown symbols are an error.
EncoderState encode_step(EncoderState state, std::string_view u,
                         const SymbolModel& model);

/// Folds encode_step over the sequence starting from x = a in [0, 1].
EncoderState encode(const std::vector<std::string>& seq, const SymbolModel& model,
                    double a = 0.0);

/// Interval endpoints of a sequence: the encoder run with a = 0 and a = 1.
std::pair<double, double> interval(const std::vector<std::string>& seq,
                                   const SymbolModel& model);

/// Inverts the recursion: emits the symbol whose interval contains x, then
/// rescales, T times. The recursion recovers the most recent symbol first;
/// the returned list is reversed back into encode order.
std::vector<std::string> decode(double x, std::size_t T, const SymbolModel& model);

/// Ideal code length in bits: sum of -log2 p(u_i) over the sequence.
double code_length_bits(const std::vector<std::string>& seq,
                        const SymbolModel& model);

/// Shortest bit string of the interval midpoint that pins [x_minus,
/// x_minus + width]: ceil(-log2 width) + 1 binary digits.
std::string transmitted_digits(double x_minus, double width);

/// Draws n length-T sequences from true_model, encodes each with
/// assumed_model from a = 0, and returns the final x values as a
/// 1-dimensional cloud. Labels map the last drawn symbol to -1 (alphabet
/// index 0) or +1 (any other index). Every symbol of true_model must
/// exist in assumed_model.
StateCloud mismatch_cloud(const SymbolModel& true_model,
                          const SymbolModel& assumed_model, std::size_t n,
                          std::size_t T, std::uint64_t seed);

/// Token spelling of a +-1 input sequence ("-1" / "+1").
std::vector<std::string> to_tokens(const InputSequence& seq);

}  // namespace esnf
