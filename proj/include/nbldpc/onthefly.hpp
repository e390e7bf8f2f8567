#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nbldpc/bec_decoder.hpp"
#include "nbldpc/code.hpp"

namespace nbldpc {

struct ArrivalBit {
    int variable;
    int position;  // constituent bit index in [0, p)
    int value;     // 0 or 1
};

using ArrivalStream = std::vector<ArrivalBit>;

/// Minimum-delay decoder: propagates each received bit through the graph as
/// it arrives, shrinking the per-variable eligible sets to quiescence (a
/// FIFO worklist closure). Reaches the same fixed point as the batch
/// decoder on the same received bits.
class OnTheFlyDecoder {
  public:
    explicit OnTheFlyDecoder(const LdpcCode& code);

    struct IngestReport {
        std::vector<int> changed_variables;
        bool contradiction = false;
    };

    /// Steps A (bit restriction), B (process incident checks) and C
    /// (re-process shrunk neighbors) for one received bit. Re-ingesting a
    /// consistent bit is a no-op.
    IngestReport ingest_bit(int variable, int position, int value);

    const std::vector<AffineSet>& sets() const { return sets_; }
    bool complete() const { return unresolved_ == 0 && !contradiction_; }
    bool contradiction() const { return contradiction_; }
    int unresolved() const { return unresolved_; }

  private:
    void process_check(int m, std::vector<int>& changed);

    const LdpcCode& code_;
    std::vector<Label> inv_labels_;
    std::vector<AffineSet> sets_;
    int unresolved_;
    bool contradiction_ = false;
};

struct StreamResult {
    /// Bits consumed when every set reached cardinality 1; empty if the
    /// stream ran out first.
    std::optional<long> k_received;
    bool contradiction = false;
    std::vector<AffineSet> sets;
};

/// Feeds stream bits in order, stopping at the first prefix that resolves
/// every variable.
StreamResult decode_stream(const LdpcCode& code, const ArrivalStream& stream);

/// True iff the on-the-fly state after ingesting the prefix equals the
/// batch decoder's a-posteriori fixed point on the same received bits.
bool equivalence_check(const LdpcCode& code, const ArrivalStream& prefix);

struct InefficiencyReport {
    std::vector<double> mu_samples;
    double mu_mean = 0.0;
    double std_error = 0.0;
    int trials = 0;
    int incomplete = 0;  // trials that never resolved even with every bit
    int k_bin = 0;
};

/// Monte-Carlo estimate of the average inefficiency mu = K_received/K_bin:
/// each trial encodes a random codeword, presents its N*p bits in a
/// uniformly random order and records the completion prefix length.
/// Trials run in parallel; per-trial seeding keeps results independent of
/// the job count.
InefficiencyReport estimate_inefficiency(const LdpcCode& code, int trials, std::uint64_t seed, int jobs = 0);

/// Convenience overload: samples one code from the ensemble first.
InefficiencyReport estimate_inefficiency(const FieldSpec& spec, int n, const DegreeDist& degrees,
                                         const LabelPdf& pdf, int trials, std::uint64_t seed, int jobs = 0);

/// Arrival-stream file: one "symbol_index bit_position bit_value" line per
/// bit, all fields 0-based.
void write_stream(std::ostream& os, const ArrivalStream& stream);
ArrivalStream read_stream(std::istream& is);
ArrivalStream read_stream_file(const std::string& path);

}  // namespace nbldpc
