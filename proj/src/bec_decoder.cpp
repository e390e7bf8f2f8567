#include "nbldpc/bec_decoder.hpp"

#include <fstream>
#include <stdexcept>

#include "nbldpc/parallel.hpp"

namespace nbldpc {

ChannelOutput::SymbolState ChannelOutput::classify(int symbol) const {
    int erased = 0;
    for (int j = 0; j < p; ++j) {
        if (bit(symbol, j) == Bit::erased) ++erased;
    }
    if (erased == p) return SymbolState::erased;
    return erased == 0 ? SymbolState::received : SymbolState::partially_erased;
}

ChannelOutput transmit(const FieldSpec& spec, const std::vector<Symbol>& word, double epsilon,
                       std::mt19937_64& rng) {
    ChannelOutput out;
    out.p = spec.p;
    out.epsilon = epsilon;
    out.bits.reserve(word.size() * spec.p);
    for (Symbol s : word) {
        for (int j = 0; j < spec.p; ++j) {
            const bool erase = double(rng() >> 11) * 0x1.0p-53 < epsilon;
            out.bits.push_back(erase ? Bit::erased : Bit((s >> j) & 1));
        }
    }
    return out;
}

std::vector<AffineSet> a_priori_sets(const FieldSpec& spec, const ChannelOutput& channel) {
    if (channel.p != spec.p) throw std::invalid_argument("channel output does not match field");
    std::vector<AffineSet> sets;
    sets.reserve(channel.n());
    for (int n = 0; n < channel.n(); ++n) {
        AffineSet s = AffineSet::full(spec.p);
        for (int j = 0; j < spec.p; ++j) {
            const Bit b = channel.bit(n, j);
            if (b != Bit::erased) s = restrict_bit(s, j, int(b));
        }
        sets.push_back(s);
    }
    return sets;
}

DecoderState init_decoder_state(const LdpcCode& code, const ChannelOutput& channel) {
    DecoderState state;
    state.a_priori = a_priori_sets(code.field_spec(), channel);
    if (int(state.a_priori.size()) != code.n()) throw std::invalid_argument("channel output length mismatch");
    state.var_to_check.reserve(code.edges().size());
    for (const auto& e : code.edges()) state.var_to_check.push_back(state.a_priori[e.variable]);
    state.check_to_var.assign(code.edges().size(), AffineSet::full(code.field_spec().p));
    state.a_posteriori = state.a_priori;
    return state;
}

AffineSet check_update(const LdpcCode& code, const DecoderState& state, int edge) {
    const Field& field = code.field();
    AffineSet acc = AffineSet::singleton(field.p(), 0);
    for (int e : code.check_edges(code.edges()[edge].check)) {
        if (e == edge) continue;
        acc = sum(acc, act(field, code.edges()[e].label, state.var_to_check[e]));
    }
    return acc;
}

AffineSet variable_update(const LdpcCode& code, const DecoderState& state, int edge) {
    const Field& field = code.field();
    AffineSet acc = state.a_priori[code.edges()[edge].variable];
    for (int e : code.variable_edges(code.edges()[edge].variable)) {
        if (e == edge) continue;
        acc = intersect(acc, act(field, invert_label(field, code.edges()[e].label), state.check_to_var[e]));
    }
    return acc;
}

void decode_step(const LdpcCode& code, DecoderState& state) {
    const Field& field = code.field();
    std::vector<AffineSet> next_b;
    next_b.reserve(code.edges().size());
    for (std::size_t e = 0; e < code.edges().size(); ++e)
        next_b.push_back(check_update(code, state, int(e)));
    state.check_to_var = std::move(next_b);
    std::vector<AffineSet> next_a;
    next_a.reserve(code.edges().size());
    for (std::size_t e = 0; e < code.edges().size(); ++e)
        next_a.push_back(variable_update(code, state, int(e)));
    state.var_to_check = std::move(next_a);
    for (int n = 0; n < code.n(); ++n) {
        AffineSet acc = state.a_priori[n];
        for (int e : code.variable_edges(n))
            acc = intersect(acc, act(field, invert_label(field, code.edges()[e].label), state.check_to_var[e]));
        state.a_posteriori[n] = std::move(acc);
    }
    ++state.iteration;
}

DecodeResult decode(const LdpcCode& code, const ChannelOutput& channel, int max_iters) {
    const Field& field = code.field();
    const int p = field.p();
    if (max_iters <= 0) max_iters = code.n();
    const std::vector<AffineSet> apriori = a_priori_sets(code.field_spec(), channel);
    if (int(apriori.size()) != code.n()) throw std::invalid_argument("channel output length mismatch");

    const auto& edges = code.edges();
    std::vector<Label> inv_labels;
    inv_labels.reserve(edges.size());
    for (const auto& e : edges) inv_labels.push_back(invert_label(field, e.label));

    // variable-to-check messages, initialized to the a-priori sets
    std::vector<AffineSet> a(edges.size(), AffineSet::full(p));
    for (std::size_t e = 0; e < edges.size(); ++e) a[e] = apriori[edges[e].variable];
    std::vector<AffineSet> b(edges.size(), AffineSet::full(p));

    DecodeResult res;
    res.a_posteriori = apriori;

    for (int it = 1; it <= max_iters; ++it) {
        res.iterations = it;
        // check pass: B_e = sum of h A over the check's other edges, via
        // prefix/suffix partial sums
        for (int m = 0; m < code.m(); ++m) {
            const auto& ce = code.check_edges(m);
            const int deg = int(ce.size());
            std::vector<AffineSet> pre(deg + 1, AffineSet::singleton(p, 0));
            std::vector<AffineSet> suf(deg + 1, AffineSet::singleton(p, 0));
            for (int i = 0; i < deg; ++i)
                pre[i + 1] = sum(pre[i], act(field, edges[ce[i]].label, a[ce[i]]));
            for (int i = deg - 1; i >= 0; --i)
                suf[i] = sum(suf[i + 1], act(field, edges[ce[i]].label, a[ce[i]]));
            for (int i = 0; i < deg; ++i) b[ce[i]] = sum(pre[i], suf[i + 1]);
        }
        // variable pass and a-posteriori sets
        bool changed = false;
        bool all_singleton = true;
        for (int n = 0; n < code.n(); ++n) {
            const auto& ve = code.variable_edges(n);
            const int deg = int(ve.size());
            std::vector<AffineSet> pre(deg + 1, AffineSet::full(p));
            std::vector<AffineSet> suf(deg + 1, AffineSet::full(p));
            pre[0] = apriori[n];
            for (int i = 0; i < deg; ++i)
                pre[i + 1] = intersect(pre[i], act(field, inv_labels[ve[i]], b[ve[i]]));
            for (int i = deg - 1; i >= 0; --i)
                suf[i] = intersect(suf[i + 1], act(field, inv_labels[ve[i]], b[ve[i]]));
            for (int i = 0; i < deg; ++i) {
                AffineSet next = intersect(pre[i], suf[i + 1]);
                if (!(next == a[ve[i]])) {
                    changed = true;
                    a[ve[i]] = std::move(next);
                }
            }
            AffineSet post = pre[deg];
            if (post.is_empty()) {
                res.outcome = DecodeOutcome::contradiction;
                res.a_posteriori[n] = post;
                return res;
            }
            if (!post.is_singleton()) all_singleton = false;
            res.a_posteriori[n] = std::move(post);
        }
        if (all_singleton) {
            res.outcome = DecodeOutcome::success;
            return res;
        }
        if (!changed) break;  // fixed point
    }
    res.outcome = DecodeOutcome::stalled;
    return res;
}

std::vector<SimulatePoint> simulate_grid(const LdpcCode& code, const std::vector<double>& epsilons,
                                         int trials, std::uint64_t seed, int jobs) {
    if (trials < 1) throw std::invalid_argument("simulate_grid: trials must be >= 1");
    const std::vector<Symbol> zero_word(code.n(), 0);
    const std::size_t total = epsilons.size() * std::size_t(trials);
    std::vector<std::uint8_t> failed(total, 0);
    std::vector<int> residual(total, 0);
    parallel_for(
        total,
        [&](std::size_t task) {
            const std::size_t i = task / trials;
            const std::size_t t = task % trials;
            std::mt19937_64 rng(mix_seed(seed, (std::uint64_t(i) << 32) | t));
            const ChannelOutput channel = transmit(code.field_spec(), zero_word, epsilons[i], rng);
            const DecodeResult res = decode(code, channel);
            if (!res.success()) {
                failed[task] = 1;
                int bits = 0;
                for (const AffineSet& s : res.a_posteriori) bits += s.direction().dim();
                residual[task] = bits;
            }
        },
        jobs);
    std::vector<SimulatePoint> out(epsilons.size());
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        out[i].epsilon = epsilons[i];
        out[i].trials = trials;
        for (int t = 0; t < trials; ++t) {
            const std::size_t task = i * trials + t;
            out[i].block_failures += failed[task];
            out[i].residual_bit_erasures += residual[task];
        }
    }
    return out;
}

void write_channel(std::ostream& os, const ChannelOutput& channel) {
    for (int n = 0; n < channel.n(); ++n) {
        for (int j = channel.p - 1; j >= 0; --j) {
            const Bit b = channel.bit(n, j);
            os << (b == Bit::erased ? 'x' : char('0' + int(b)));
        }
        os << '\n';
    }
}

ChannelOutput read_channel(std::istream& is, int p) {
    ChannelOutput out;
    out.p = p;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (int(line.size()) != p) throw std::runtime_error("channel file: line length must equal p");
        // line is MSB-first: character 0 is bit position p-1
        for (int j = 0; j < p; ++j) {
            const char c = line[p - 1 - j];
            if (c == 'x' || c == 'X') out.bits.push_back(Bit::erased);
            else if (c == '0') out.bits.push_back(Bit::zero);
            else if (c == '1') out.bits.push_back(Bit::one);
            else throw std::runtime_error("channel file: bad character");
        }
    }
    return out;
}

void write_channel_file(const std::string& path, const ChannelOutput& channel) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    write_channel(os, channel);
}

ChannelOutput read_channel_file(const std::string& path, int p) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open channel file: " + path);
    return read_channel(is, p);
}

}  // namespace nbldpc
