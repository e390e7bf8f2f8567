#include "nbldpc/onthefly.hpp"

#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "nbldpc/parallel.hpp"

namespace nbldpc {

OnTheFlyDecoder::OnTheFlyDecoder(const LdpcCode& code)
    : code_(code), sets_(code.n(), AffineSet::full(code.field_spec().p)), unresolved_(code.n()) {
    inv_labels_.reserve(code.edges().size());
    for (const auto& e : code.edges()) inv_labels_.push_back(invert_label(code.field(), e.label));
}

void OnTheFlyDecoder::process_check(int m, std::vector<int>& changed) {
    const Field& field = code_.field();
    const int p = field.p();
    const auto& ce = code_.check_edges(m);
    const int deg = int(ce.size());
    const auto& edges = code_.edges();
    // prefix/suffix partial sums of h E over the check's neighbors
    std::vector<AffineSet> pre(deg + 1, AffineSet::singleton(p, 0));
    std::vector<AffineSet> suf(deg + 1, AffineSet::singleton(p, 0));
    for (int i = 0; i < deg; ++i)
        pre[i + 1] = sum(pre[i], act(field, edges[ce[i]].label, sets_[edges[ce[i]].variable]));
    for (int i = deg - 1; i >= 0; --i)
        suf[i] = sum(suf[i + 1], act(field, edges[ce[i]].label, sets_[edges[ce[i]].variable]));
    for (int i = 0; i < deg; ++i) {
        const int v = edges[ce[i]].variable;
        const AffineSet msg = act(field, inv_labels_[ce[i]], sum(pre[i], suf[i + 1]));
        AffineSet next = intersect(sets_[v], msg);
        if (next == sets_[v]) continue;
        if (next.is_empty()) {
            contradiction_ = true;
            sets_[v] = std::move(next);
            return;
        }
        if (next.is_singleton() && !sets_[v].is_singleton()) --unresolved_;
        sets_[v] = std::move(next);
        changed.push_back(v);
    }
}

OnTheFlyDecoder::IngestReport OnTheFlyDecoder::ingest_bit(int variable, int position, int value) {
    IngestReport report;
    if (contradiction_) {
        report.contradiction = true;
        return report;
    }
    const int p = code_.field_spec().p;
    if (variable < 0 || variable >= code_.n() || position < 0 || position >= p || (value & ~1) != 0)
        throw std::invalid_argument("ingest_bit: bad arrival");
    AffineSet next = restrict_bit(sets_[variable], position, value);
    if (next == sets_[variable]) return report;
    if (next.is_empty()) {
        contradiction_ = true;
        report.contradiction = true;
        sets_[variable] = std::move(next);
        return report;
    }
    if (next.is_singleton() && !sets_[variable].is_singleton()) --unresolved_;
    sets_[variable] = std::move(next);
    report.changed_variables.push_back(variable);

    std::deque<int> work{variable};
    while (!work.empty() && !contradiction_) {
        const int v = work.front();
        work.pop_front();
        for (int e : code_.variable_edges(v)) {
            std::vector<int> shrunk;
            process_check(code_.edges()[e].check, shrunk);
            for (int v2 : shrunk) {
                work.push_back(v2);
                report.changed_variables.push_back(v2);
            }
            if (contradiction_) break;
        }
    }
    report.contradiction = contradiction_;
    return report;
}

StreamResult decode_stream(const LdpcCode& code, const ArrivalStream& stream) {
    OnTheFlyDecoder dec(code);
    StreamResult res;
    long consumed = 0;
    if (dec.complete()) {
        res.k_received = 0;
        res.sets = dec.sets();
        return res;
    }
    for (const ArrivalBit& bit : stream) {
        auto rep = dec.ingest_bit(bit.variable, bit.position, bit.value);
        ++consumed;
        if (rep.contradiction) {
            res.contradiction = true;
            res.sets = dec.sets();
            return res;
        }
        if (dec.complete()) {
            res.k_received = consumed;
            res.sets = dec.sets();
            return res;
        }
    }
    res.sets = dec.sets();
    return res;
}

bool equivalence_check(const LdpcCode& code, const ArrivalStream& prefix) {
    const int p = code.field_spec().p;
    OnTheFlyDecoder dec(code);
    for (const ArrivalBit& bit : prefix) {
        auto rep = dec.ingest_bit(bit.variable, bit.position, bit.value);
        if (rep.contradiction) return false;
    }
    ChannelOutput channel;
    channel.p = p;
    channel.bits.assign(std::size_t(code.n()) * p, Bit::erased);
    for (const ArrivalBit& bit : prefix)
        channel.bits[std::size_t(bit.variable) * p + bit.position] = Bit(bit.value);
    const DecodeResult batch = decode(code, channel);
    if (batch.outcome == DecodeOutcome::contradiction) return false;
    for (int n = 0; n < code.n(); ++n) {
        if (!(batch.a_posteriori[n] == dec.sets()[n])) return false;
    }
    return true;
}

namespace {

double next_double(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

}  // namespace

InefficiencyReport estimate_inefficiency(const LdpcCode& code, int trials, std::uint64_t seed, int jobs) {
    if (trials < 1) throw std::invalid_argument("estimate_inefficiency: trials must be >= 1");
    const Encoder encoder(code);
    const int k_bin = encoder.k_bin();
    if (k_bin == 0) throw std::invalid_argument("estimate_inefficiency: code has K_bin = 0");
    const int p = code.field_spec().p;
    const long np = long(code.n()) * p;

    InefficiencyReport report;
    report.trials = trials;
    report.k_bin = k_bin;
    report.mu_samples.assign(trials, -1.0);

    parallel_for(
        std::size_t(trials),
        [&](std::size_t t) {
            std::mt19937_64 rng(mix_seed(seed, t));
            std::vector<std::uint8_t> message(k_bin);
            for (auto& b : message) b = std::uint8_t(rng() & 1);
            const std::vector<Symbol> word = encoder.encode(message);
            ArrivalStream order;
            order.reserve(np);
            for (int n = 0; n < code.n(); ++n) {
                for (int j = 0; j < p; ++j) order.push_back({n, j, (word[n] >> j) & 1});
            }
            for (long i = np - 1; i > 0; --i) {
                const long j = long(next_double(rng) * double(i + 1));
                std::swap(order[i], order[j]);
            }
            const StreamResult res = decode_stream(code, order);
            if (res.k_received) report.mu_samples[t] = double(*res.k_received) / k_bin;
        },
        jobs);

    std::vector<double> kept;
    kept.reserve(trials);
    for (double mu : report.mu_samples) {
        if (mu < 0) {
            ++report.incomplete;
        } else {
            kept.push_back(mu);
        }
    }
    report.mu_samples = kept;
    if (!kept.empty()) {
        double sum = 0.0;
        for (double mu : kept) sum += mu;
        report.mu_mean = sum / double(kept.size());
        double var = 0.0;
        for (double mu : kept) var += (mu - report.mu_mean) * (mu - report.mu_mean);
        if (kept.size() > 1) {
            var /= double(kept.size() - 1);
            report.std_error = std::sqrt(var / double(kept.size()));
        }
    }
    return report;
}

InefficiencyReport estimate_inefficiency(const FieldSpec& spec, int n, const DegreeDist& degrees,
                                         const LabelPdf& pdf, int trials, std::uint64_t seed, int jobs) {
    const LdpcCode code = sample_code(spec, n, degrees, pdf, mix_seed(seed, 0x636f6465));
    return estimate_inefficiency(code, trials, seed, jobs);
}

void write_stream(std::ostream& os, const ArrivalStream& stream) {
    for (const ArrivalBit& b : stream) os << b.variable << ' ' << b.position << ' ' << b.value << '\n';
}

ArrivalStream read_stream(std::istream& is) {
    ArrivalStream out;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        ArrivalBit b{};
        if (!(ls >> b.variable >> b.position >> b.value))
            throw std::runtime_error("stream file: expected 'symbol_index bit_position bit_value'");
        out.push_back(b);
    }
    return out;
}

ArrivalStream read_stream_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open stream file: " + path);
    return read_stream(is);
}

}  // namespace nbldpc
