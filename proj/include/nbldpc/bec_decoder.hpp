#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "nbldpc/code.hpp"
#include "nbldpc/subspace.hpp"

namespace nbldpc {

enum class Bit : std::int8_t { zero = 0, one = 1, erased = -1 };

/// Per-bit channel observations for N symbols of p constituent bits each.
struct ChannelOutput {
    int p = 1;
    std::vector<Bit> bits;  // size N*p; bit j of symbol n at index n*p + j
    double epsilon = 0.0;   // erasure probability used to generate it (metadata)

    int n() const { return int(bits.size()) / p; }
    Bit bit(int symbol, int pos) const { return bits[std::size_t(symbol) * p + pos]; }

    enum class SymbolState { received, partially_erased, erased };
    SymbolState classify(int symbol) const;
};

/// Transmits a codeword's bits over BEC(epsilon).
ChannelOutput transmit(const FieldSpec& spec, const std::vector<Symbol>& word, double epsilon,
                       std::mt19937_64& rng);

/// A-priori eligible sets: all symbols matching the received constituent
/// bits; the full space for an erased symbol, a singleton for a received one.
std::vector<AffineSet> a_priori_sets(const FieldSpec& spec, const ChannelOutput& channel);

/// Message state of the iterative decoder: a-priori and a-posteriori sets
/// per variable, and the two message families per edge.
struct DecoderState {
    std::vector<AffineSet> a_priori;
    std::vector<AffineSet> var_to_check;
    std::vector<AffineSet> check_to_var;
    std::vector<AffineSet> a_posteriori;
    int iteration = 0;
};

/// var_to_check messages initialized to the a-priori sets.
DecoderState init_decoder_state(const LdpcCode& code, const ChannelOutput& channel);

/// B = sum over the check's other edges of h A; {0} for a degree-1 check.
AffineSet check_update(const LdpcCode& code, const DecoderState& state, int edge);

/// A = E intersected with h^{-1} B over the variable's other edges.
AffineSet variable_update(const LdpcCode& code, const DecoderState& state, int edge);

/// One flooding iteration through the two update rules, then the
/// a-posteriori intersections. Reference path for decode().
void decode_step(const LdpcCode& code, DecoderState& state);

enum class DecodeOutcome { success, stalled, contradiction };

struct DecodeResult {
    DecodeOutcome outcome = DecodeOutcome::stalled;
    int iterations = 0;
    std::vector<AffineSet> a_posteriori;

    bool success() const { return outcome == DecodeOutcome::success; }
};

/// Flooding iterative decoder on eligible-symbol sets. Each iteration runs
/// every check update B = sum h A, every variable update A = E ^ h^{-1}B,
/// and the a-posteriori intersection; stops on all-singletons, on an
/// unchanged pass (fixed point), or at max_iters (default: N).
/// A contradiction (empty set) cannot arise from genuine BEC output of a
/// codeword and is surfaced as a distinct outcome.
DecodeResult decode(const LdpcCode& code, const ChannelOutput& channel, int max_iters = 0);

struct SimulatePoint {
    double epsilon = 0.0;
    int trials = 0;
    int block_failures = 0;
    long residual_bit_erasures = 0;  // unresolved dimensions summed over failed trials
};

/// Block failure rate of the batch decoder over an erasure-probability
/// grid. Transmits the all-zero codeword (the decoder's set cardinalities
/// depend only on the erasure pattern). Per-trial seeds derive from
/// (seed, grid index, trial index); results are independent of job count.
std::vector<SimulatePoint> simulate_grid(const LdpcCode& code, const std::vector<double>& epsilons,
                                         int trials, std::uint64_t seed, int jobs = 0);

/// Channel-output file: one line per symbol, p characters from {0,1,x},
/// most significant constituent bit first.
void write_channel(std::ostream& os, const ChannelOutput& channel);
ChannelOutput read_channel(std::istream& is, int p);
void write_channel_file(const std::string& path, const ChannelOutput& channel);
ChannelOutput read_channel_file(const std::string& path, int p);

}  // namespace nbldpc
