#include <doctest.h>

#include <sstream>
#include <stdexcept>

#include <random>
#include <set>

#include "nbldpc/bec_decoder.hpp"

using namespace nbldpc;

namespace {

ChannelOutput channel_from_string(int p, const std::vector<std::string>& lines) {
    ChannelOutput out;
    out.p = p;
    for (const auto& line : lines) {
        REQUIRE(int(line.size()) == p);
        for (int j = 0; j < p; ++j) {
            const char c = line[p - 1 - j];  // MSB first
            out.bits.push_back(c == 'x' ? Bit::erased : (c == '1' ? Bit::one : Bit::zero));
        }
    }
    return out;
}

std::set<Symbol> as_set(const AffineSet& a) {
    auto el = a.elements();
    return {el.begin(), el.end()};
}

LdpcCode single_check_code(Symbol h1, Symbol h2) {
    std::vector<LdpcCode::Edge> edges{{0, 0, Label::make_unit(h1)}, {0, 1, Label::make_unit(h2)}};
    return LdpcCode(FieldSpec{2}, LabelKind::field_unit, 2, 1, std::move(edges));
}

}  // namespace

TEST_CASE("a-priori sets follow Table I") {
    FieldSpec gf8(3);
    auto sets = a_priori_sets(gf8, channel_from_string(3, {"0xx", "000", "x00", "xxx", "x0x"}));
    CHECK(as_set(sets[0]) == std::set<Symbol>{0, 1, 2, 3});
    CHECK(as_set(sets[1]) == std::set<Symbol>{0});
    CHECK(as_set(sets[2]) == std::set<Symbol>{0, 4});
    CHECK(sets[3].cardinality() == 8);
    CHECK(as_set(sets[4]) == std::set<Symbol>{0, 1, 4, 5});

    ChannelOutput chan = channel_from_string(3, {"0xx", "000", "xxx"});
    CHECK(chan.classify(0) == ChannelOutput::SymbolState::partially_erased);
    CHECK(chan.classify(1) == ChannelOutput::SymbolState::received);
    CHECK(chan.classify(2) == ChannelOutput::SymbolState::erased);
}

TEST_CASE("a-priori sets honor received one-bits") {
    FieldSpec gf8(3);
    auto sets = a_priori_sets(gf8, channel_from_string(3, {"1xx", "x10"}));
    CHECK(as_set(sets[0]) == std::set<Symbol>{4, 5, 6, 7});
    CHECK(as_set(sets[1]) == std::set<Symbol>{2, 6});
}

TEST_CASE("check and variable update rules") {
    // two checks on three variables over GF4
    std::vector<LdpcCode::Edge> edges{{0, 0, Label::make_unit(2)},
                                      {0, 1, Label::make_unit(1)},
                                      {0, 2, Label::make_unit(1)},
                                      {1, 2, Label::make_unit(1)}};
    LdpcCode code(FieldSpec{2}, LabelKind::field_unit, 3, 2, std::move(edges));

    ChannelOutput chan = channel_from_string(2, {"xx", "xx", "xx"});
    DecoderState state = init_decoder_state(code, chan);

    SUBCASE("degree-1 check sends the zero singleton") {
        CHECK(as_set(check_update(code, state, 3)) == std::set<Symbol>{0});
    }
    SUBCASE("singleton neighbors determine the message") {
        // edge 2's message from check 0: 2*A(v0) + 1*A(v1)
        state.var_to_check[0] = AffineSet::singleton(2, 3);
        state.var_to_check[1] = AffineSet::singleton(2, 2);
        Field f{FieldSpec{2}};
        CHECK(as_set(check_update(code, state, 2)) ==
              std::set<Symbol>{Symbol(f.mul(2, 3) ^ 2)});
    }
    SUBCASE("mixed sets: act then sum, element oracle") {
        state.var_to_check[0] = AffineSet(0, Subspace::span(2, {1}));  // {0,1}, label 2
        state.var_to_check[1] = AffineSet::singleton(2, 0);            // {0}, label 1
        CHECK(as_set(check_update(code, state, 2)) == std::set<Symbol>{0, 2});
    }
    SUBCASE("degree-1 variable repeats its a-priori set") {
        ChannelOutput c2 = channel_from_string(2, {"x0", "xx", "xx"});
        DecoderState s2 = init_decoder_state(code, c2);
        CHECK(variable_update(code, s2, 1) == s2.a_priori[1]);
    }
    SUBCASE("singleton a-priori wins the intersection") {
        ChannelOutput c3 = channel_from_string(2, {"10", "xx", "xx"});
        DecoderState s3 = init_decoder_state(code, c3);
        s3.check_to_var[0] = AffineSet::full(2);
        CHECK(as_set(variable_update(code, s3, 0)) == std::set<Symbol>{2});
    }
}

TEST_CASE("variable update composes like Table I") {
    // GF8 variable of degree 2: E = {0,1,2,3}, one incoming B = {0,1,4,5}, label 1
    std::vector<LdpcCode::Edge> edges{{0, 0, Label::make_unit(1)}, {1, 0, Label::make_unit(1)}};
    LdpcCode code(FieldSpec{3}, LabelKind::field_unit, 1, 2, std::move(edges));
    ChannelOutput chan = channel_from_string(3, {"0xx"});
    DecoderState state = init_decoder_state(code, chan);
    state.check_to_var[1] = AffineSet(0, Subspace::span(3, {1, 4}));
    CHECK(as_set(variable_update(code, state, 0)) == std::set<Symbol>{0, 1});
}

TEST_CASE("decode examples") {
    SUBCASE("zero erasures succeed in one iteration") {
        LdpcCode code = single_check_code(1, 1);
        ChannelOutput chan = channel_from_string(2, {"11", "11"});
        DecodeResult res = decode(code, chan);
        CHECK(res.success());
        CHECK(res.iterations == 1);
        for (const auto& s : res.a_posteriori) CHECK(s.is_singleton());
    }
    SUBCASE("everything erased stalls with full sets") {
        LdpcCode code = single_check_code(1, 2);
        ChannelOutput chan = channel_from_string(2, {"xx", "xx"});
        DecodeResult res = decode(code, chan);
        CHECK(res.outcome == DecodeOutcome::stalled);
        for (const auto& s : res.a_posteriori) CHECK(s.cardinality() == 4);
    }
    SUBCASE("single check solves the erased symbol") {
        // s1 + 2 s2 = 0, s1 = 1 received, s2 erased -> s2 = inv(2)*1 = 3
        LdpcCode code = single_check_code(1, 2);
        ChannelOutput chan = channel_from_string(2, {"01", "xx"});
        DecodeResult res = decode(code, chan);
        CHECK(res.success());
        CHECK(as_set(res.a_posteriori[1]) == std::set<Symbol>{3});
    }
    SUBCASE("inconsistent input surfaces a contradiction") {
        // degree-1 check forces s = 0, channel claims s = 1
        std::vector<LdpcCode::Edge> edges{{0, 0, Label::make_unit(1)}};
        LdpcCode code(FieldSpec{2}, LabelKind::field_unit, 1, 1, std::move(edges));
        ChannelOutput chan = channel_from_string(2, {"01"});
        CHECK(decode(code, chan).outcome == DecodeOutcome::contradiction);
    }
}

TEST_CASE("fused decoder equals the reference update rules") {
    std::mt19937_64 rng(97);
    for (int trial = 0; trial < 25; ++trial) {
        const int p = 2 + int(rng() % 2);
        FieldSpec spec(p);
        DegreeDist dd({{2, 1.0}}, {{3, 1.0}});
        const LabelKind kind = rng() % 2 ? LabelKind::field_unit : LabelKind::bin_matrix;
        LdpcCode code = sample_code(spec, 3 * (3 + int(rng() % 6)), dd, LabelPdf::uniform(spec, kind), rng());
        const std::vector<Symbol> zero(code.n(), 0);
        std::mt19937_64 chan_rng(rng());
        ChannelOutput chan = transmit(spec, zero, 0.4 + 0.3 * double(rng() % 100) / 100, chan_rng);

        DecodeResult fast = decode(code, chan);
        DecoderState state = init_decoder_state(code, chan);
        for (int it = 0; it < 2 * code.n(); ++it) decode_step(code, state);
        for (int n = 0; n < code.n(); ++n) CHECK(state.a_posteriori[n] == fast.a_posteriori[n]);
    }
}

TEST_CASE("genie containment and monotone shrinkage") {
    std::mt19937_64 rng(1234);
    FieldSpec gf4(2);
    DegreeDist dd({{2, 1.0}}, {{3, 1.0}});
    LdpcCode code = sample_code(gf4, 30, dd, LabelPdf::uniform(gf4, LabelKind::field_unit), 77);
    Encoder enc(code);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::uint8_t> msg(enc.k_bin());
        for (auto& b : msg) b = std::uint8_t(rng() & 1);
        const auto word = enc.encode(msg);
        ChannelOutput chan = transmit(gf4, word, 0.5, rng);
        DecoderState state = init_decoder_state(code, chan);
        auto prev_a = state.var_to_check;
        auto prev_post = state.a_posteriori;
        for (int it = 0; it < 10; ++it) {
            decode_step(code, state);
            for (std::size_t e = 0; e < code.edges().size(); ++e) {
                const auto& ed = code.edges()[e];
                CHECK(state.var_to_check[e].contains(word[ed.variable]));
                CHECK(state.check_to_var[e].contains(
                    apply_label(code.field(), ed.label, word[ed.variable])));
                // monotone: A^{(l+1)} subset of A^{(l)}
                for (Symbol s : state.var_to_check[e].elements()) CHECK(prev_a[e].contains(s));
            }
            for (int n = 0; n < code.n(); ++n) {
                CHECK(state.a_posteriori[n].contains(word[n]));
                for (Symbol s : state.a_posteriori[n].elements()) CHECK(prev_post[n].contains(s));
            }
            prev_a = state.var_to_check;
            prev_post = state.a_posteriori;
        }
    }
}

TEST_CASE("channel file round-trip") {
    ChannelOutput chan = channel_from_string(3, {"0x1", "111", "xxx"});
    std::ostringstream os;
    write_channel(os, chan);
    CHECK(os.str() == "0x1\n111\nxxx\n");
    std::istringstream is(os.str());
    ChannelOutput back = read_channel(is, 3);
    CHECK(back.bits == chan.bits);
    std::istringstream bad("0z1\n");
    CHECK_THROWS(read_channel(bad, 3));
}
