// Acceptance suite: one runnable criterion per invocation (c1..c10), each
// printing a single PASS/FAIL line with the measured numbers.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "nbldpc/density_evolution.hpp"
#include "nbldpc/onthefly.hpp"
#include "nbldpc/parallel.hpp"

using namespace nbldpc;

namespace {

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond) ok = false;
        detail += (detail.empty() ? "" : "; ") + what + (cond ? " [ok]" : " [VIOLATED]");
    }
};

double now_seconds(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

const DegreeDist kDeg23({{2, 1.0}}, {{3, 1.0}});
const DegreeDist kDeg34({{3, 1.0}}, {{4, 1.0}});
const DegreeDist kDegFig3({{2, 0.5}, {5, 0.5}}, {{6, 1.0}});

LabelPdf unit_pdf(const FieldSpec& spec, std::vector<std::pair<int, double>> entries) {
    std::vector<std::pair<Label, double>> support;
    for (auto& [u, prob] : entries) support.emplace_back(Label::make_unit(Symbol(u)), prob);
    return LabelPdf(std::move(support), spec);
}

double field_threshold(int p, const DegreeDist& dd, const LabelPdf& pdf, const DeOptions& opts = {}) {
    DeContext ctx(FieldSpec(p), pdf);
    return threshold(ctx, dd, opts);
}

// Criterion 1: GF4, lambda=X, rho=X^2, uniform f -> 0.5772 within 5e-4, under 5 s.
Check criterion1() {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    const double th = field_threshold(2, kDeg23, LabelPdf::uniform(FieldSpec(2), LabelKind::field_unit));
    const double secs = now_seconds(t0);
    c.require(std::abs(th - 0.5772) <= 5e-4, "threshold " + fmt("%.5f", th) + " within 0.5772 +/- 0.0005");
    c.require(secs < 5.0, "runtime " + fmt("%.2f", secs) + "s < 5s");
    return c;
}

// Criterion 2: concentrated f -> 0.5000 within 5e-4, and the recursion
// degenerates to the binary (2,3) recursion whose fixed-point condition is
// 2 eps = 1 exactly.
Check criterion2() {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    FieldSpec gf4(2);
    for (int unit = 1; unit <= 3; ++unit) {
        const double th = field_threshold(2, kDeg23, LabelPdf::concentrated(gf4, Label::make_unit(Symbol(unit))));
        c.require(std::abs(th - 0.5) <= 5e-4,
                  "f=delta(" + std::to_string(unit) + ") threshold " + fmt("%.5f", th) + " within 0.5 +/- 0.0005");
    }
    // recursion-level identity: per-bit marginal of the identity-label DE
    // equals the scalar binary recursion x' = eps(1-(1-x)^2)
    DeContext ctx(gf4, LabelPdf::concentrated(gf4, Label::make_unit(1)));
    const double eps = 0.47;
    SubspaceDist gamma = gamma_dist(ctx, eps);
    SubspaceDist P = gamma;
    double x = eps;
    double max_err = 0.0;
    for (int it = 0; it < 100; ++it) {
        P = de_iteration(ctx, kDeg23, gamma, P).p_next;
        double mass = 0.0;
        for (double v : P) mass += v;
        for (double& v : P) v /= mass;
        x = eps * (1.0 - (1.0 - x) * (1.0 - x));
        double marginal = 0.0;
        for (std::size_t v = 0; v < ctx.size(); ++v) {
            if (ctx.grassmannian()[v].contains(1)) marginal += P[v];
        }
        max_err = std::max(max_err, std::abs(marginal - x));
    }
    c.require(max_err <= 1e-12, "binary-recursion marginal identity, max err " + fmt("%.2e", max_err));
    // analytic condition 2 eps = 1: the recursion x = eps(1-(1-x)^2) has the
    // nontrivial fixed point x* = 2 - 1/eps, which vanishes exactly when
    // 2 eps = 1; check the algebra bit-exactly and the survival behavior
    // decisively on either side
    auto scalar_map = [](double e, double y) { return e * (1.0 - (1.0 - y) * (1.0 - y)); };
    const bool algebra = (2.0 - 1.0 / 0.5 == 0.0) && (scalar_map(0.625, 0.4) == 0.4);
    auto scalar_survives = [&](double e) {
        double y = e;
        for (int i = 0; i < 200000; ++i) y = scalar_map(e, y);
        return y > 1e-9;
    };
    c.require(algebra && scalar_survives(0.5 + 1e-3) && !scalar_survives(0.5 - 1e-3),
              "analytic binary condition 2eps=1 at the recursion level");
    const double secs = now_seconds(t0);
    c.require(secs < 5.0, "runtime " + fmt("%.2f", secs) + "s < 5s");
    return c;
}

// Criterion 3: GF4 (X^2, X^3) thresholds and the 25-per-axis surface sweep.
Check criterion3() {
    Check c;
    FieldSpec gf4(2);
    const double uni = field_threshold(2, kDeg34, LabelPdf::uniform(gf4, LabelKind::field_unit));
    c.require(std::abs(uni - 0.6348) <= 5e-4, "uniform " + fmt("%.5f", uni) + " within 0.6348 +/- 0.0005");
    const double conc = field_threshold(2, kDeg34, LabelPdf::concentrated(gf4, Label::make_unit(1)));
    c.require(std::abs(conc - 0.6474) <= 5e-4, "concentrated " + fmt("%.5f", conc) + " within 0.6474 +/- 0.0005");
    const auto t0 = std::chrono::steady_clock::now();
    auto pts = threshold_surface(gf4, kDeg34, enumerate_label_group(gf4, LabelKind::field_unit), 25, {}, 4);
    const double secs = now_seconds(t0);
    c.require(pts.size() == 325, "triangular grid has 325 points");
    double lo = 1.0;
    for (const auto& pt : pts) lo = std::min(lo, pt.threshold);
    c.require(lo >= 0.6341 && lo <= 0.6351,
              "surface minimum " + fmt("%.5f", lo) + " inside [0.6341, 0.6351]");
    c.require(secs < 600.0, "surface runtime " + fmt("%.1f", secs) + "s < 600s at jobs=4");
    return c;
}

// Criterion 4: GF8 Fig. 3 rows for lambda = 0.5X+0.5X^4, rho = X^5.
Check criterion4() {
    Check c;
    FieldSpec gf8(3);
    const std::vector<std::pair<LabelPdf, double>> rows{
        {LabelPdf::uniform(gf8, LabelKind::field_unit), 0.4353},
        {unit_pdf(gf8, {{1, 0.8}, {7, 0.2}}), 0.4483},
        {unit_pdf(gf8, {{1, 0.9}, {7, 0.1}}), 0.436},
        {unit_pdf(gf8, {{1, 1.0}}), 0.4},
    };
    for (const auto& [pdf, expect] : rows) {
        const auto t0 = std::chrono::steady_clock::now();
        const double th = field_threshold(3, kDegFig3, pdf);
        const double secs = now_seconds(t0);
        c.require(std::abs(th - expect) <= 5e-4,
                  "threshold " + fmt("%.5f", th) + " within " + fmt("%.4f", expect) + " +/- 0.0005");
        c.require(secs < 60.0, "runtime " + fmt("%.1f", secs) + "s < 60s");
    }
    return c;
}

// Criterion 5: GF4 Fig. 3 rows for the same degree pair.
Check criterion5() {
    Check c;
    FieldSpec gf4(2);
    const std::vector<std::pair<LabelPdf, double>> rows{
        {LabelPdf::uniform(gf4, LabelKind::field_unit), 0.4487},
        {unit_pdf(gf4, {{1, 0.8}, {2, 0.1}, {3, 0.1}}), 0.4507},
        {unit_pdf(gf4, {{1, 1.0}}), 0.4},
    };
    for (const auto& [pdf, expect] : rows) {
        const double th = field_threshold(2, kDegFig3, pdf);
        c.require(std::abs(th - expect) <= 5e-4,
                  "threshold " + fmt("%.5f", th) + " within " + fmt("%.4f", expect) + " +/- 0.0005");
    }
    return c;
}

// Criterion 6: factored vs direct-enumeration density evolution oracle.
Check criterion6() {
    Check c;
    std::mt19937_64 rng(20250811);
    FieldSpec gf4(2);
    double worst = 0.0;
    for (int t = 0; t < 24; ++t) {
        auto group = enumerate_label_group(gf4, LabelKind::field_unit);
        std::vector<std::pair<Label, double>> support;
        double total = 0.0;
        std::vector<double> w(group.size());
        for (double& x : w) {
            x = double(rng() % 1000) + 1;
            total += x;
        }
        for (std::size_t i = 0; i < group.size(); ++i) support.emplace_back(group[i], w[i] / total);
        DeContext ctx(gf4, LabelPdf(std::move(support), gf4));
        const int dv = 2 + int(rng() % 2);
        const int dc = std::min(4, dv + 1 + int(rng() % 2));
        DegreeDist dd({{dv, 1.0}}, {{dc, 1.0}});
        const double eps = 0.05 + 0.9 * double(rng() % 1000) / 1000;
        SubspaceDist gamma = gamma_dist(ctx, eps);
        SubspaceDist p = gamma_dist(ctx, 0.2 + 0.6 * double(rng() % 1000) / 1000);
        const DeIterationResult a = de_iteration(ctx, dd, gamma, p);
        const DeIterationResult b = de_iteration_direct(ctx, dd, gamma, p);
        for (std::size_t v = 0; v < ctx.size(); ++v) {
            worst = std::max(worst, std::abs(a.q_next[v] - b.q_next[v]));
            worst = std::max(worst, std::abs(a.p_next[v] - b.p_next[v]));
        }
    }
    c.require(worst <= 1e-12, "max |factored - direct| = " + fmt("%.2e", worst) + " over 24 instances");
    return c;
}

// Criterion 7: conjugation-class and dimension-collapsed recursions match
// the unreduced thresholds.
Check criterion7() {
    Check c;
    FieldSpec gf4(2);
    const DeOptions opts;
    {
        LabelPdf pdf = LabelPdf::uniform(gf4, LabelKind::field_unit);
        const double full = field_threshold(2, kDeg23, pdf);
        const double red = ReducedDe(gf4, pdf).threshold(kDeg23, opts);
        c.require(std::abs(full - red) <= opts.bisection_tolerance,
                  "GF4* uniform: reduced " + fmt("%.6f", red) + " vs full " + fmt("%.6f", full));
    }
    {
        LabelPdf pdf = LabelPdf::uniform(gf4, LabelKind::bin_matrix);
        ReducedDe red(gf4, pdf);
        c.require(red.state_size() == 3, "M2*(GF2) state collapses to dimensions 0..2");
        const double full = [&] {
            DeContext ctx(gf4, pdf);
            return threshold(ctx, kDeg23, opts);
        }();
        const double r = red.threshold(kDeg23, opts);
        c.require(std::abs(full - r) <= opts.bisection_tolerance,
                  "M2*(GF2) uniform: reduced " + fmt("%.6f", r) + " vs full " + fmt("%.6f", full));
    }
    return c;
}

// Criterion 8: decoder property suite over 1000 randomized trials.
Check criterion8() {
    Check c;
    long violations_genie = 0, violations_monotone = 0, violations_pow2 = 0, equivalence_failures = 0;
    const int kTrials = 1000;
    std::vector<std::uint8_t> trial_ok(kTrials, 0);
    std::vector<std::array<long, 4>> counters(kTrials, {0, 0, 0, 0});
    parallel_for(kTrials, [&](std::size_t trial) {
        std::mt19937_64 rng(mix_seed(0xacce97a, trial));
        const int p = 2 + int(rng() % 2);
        FieldSpec spec(p);
        const LabelKind kind = rng() % 2 ? LabelKind::field_unit : LabelKind::bin_matrix;
        const int n = 3 * (4 + int(rng() % 15));
        LdpcCode code = sample_code(spec, n, kDeg23, LabelPdf::uniform(spec, kind), rng());
        Encoder enc(code);
        std::vector<std::uint8_t> msg(enc.k_bin());
        for (auto& b : msg) b = std::uint8_t(rng() & 1);
        const auto word = enc.encode(msg);
        std::mt19937_64 chan_rng(rng());
        const double eps = double(rng() % 1000) / 1000;
        ChannelOutput chan = transmit(spec, word, eps, chan_rng);

        auto& ctr = counters[trial];
        DecoderState state = init_decoder_state(code, chan);
        std::vector<std::size_t> prev_cards;
        for (const auto& s : state.a_posteriori) prev_cards.push_back(s.cardinality());
        for (int it = 0; it < 2 * code.n(); ++it) {
            decode_step(code, state);
            for (std::size_t e = 0; e < code.edges().size(); ++e) {
                const auto& ed = code.edges()[e];
                if (!state.var_to_check[e].contains(word[ed.variable])) ++ctr[0];
                const auto card = state.var_to_check[e].cardinality();
                if (card == 0 || (card & (card - 1)) != 0) ++ctr[2];
            }
            for (int v = 0; v < code.n(); ++v) {
                if (!state.a_posteriori[v].contains(word[v])) ++ctr[0];
                const auto card = state.a_posteriori[v].cardinality();
                if (card == 0 || (card & (card - 1)) != 0) ++ctr[2];
                if (card > prev_cards[v]) ++ctr[1];
                prev_cards[v] = card;
            }
        }
        // on-the-fly closure vs batch fixed point on the received bits
        ArrivalStream prefix;
        for (int v = 0; v < code.n(); ++v) {
            for (int j = 0; j < p; ++j) {
                if (chan.bit(v, j) != Bit::erased) prefix.push_back({v, j, int(chan.bit(v, j))});
            }
        }
        std::shuffle(prefix.begin(), prefix.end(), rng);
        if (!equivalence_check(code, prefix)) ++ctr[3];
        trial_ok[trial] = 1;
    });
    for (int t = 0; t < kTrials; ++t) {
        violations_genie += counters[t][0];
        violations_monotone += counters[t][1];
        violations_pow2 += counters[t][2];
        equivalence_failures += counters[t][3];
    }
    c.require(std::count(trial_ok.begin(), trial_ok.end(), 1) == kTrials, "all 1000 trials ran");
    c.require(violations_genie == 0, "genie containment violations = " + std::to_string(violations_genie));
    c.require(violations_monotone == 0, "monotone shrinkage violations = " + std::to_string(violations_monotone));
    c.require(violations_pow2 == 0, "power-of-2 cardinality violations = " + std::to_string(violations_pow2));
    c.require(equivalence_failures == 0,
              "batch/on-the-fly equivalence failures = " + std::to_string(equivalence_failures));
    return c;
}

// Criterion 9: the inefficiency identity mu_m - 1 = integral of p(eps),
// tested at 3 combined standard errors on a N=1000 GF4 (X,X^2) code.
Check criterion9() {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    FieldSpec gf4(2);
    LdpcCode code = sample_code(gf4, 1000, kDeg23, LabelPdf::uniform(gf4, LabelKind::field_unit), 97);
    const InefficiencyReport rep = estimate_inefficiency(code, 2000, 4242);
    const long np = code.bit_length();

    const int grid_points = 50, grid_trials = 500;
    std::vector<double> grid;
    for (int i = 0; i < grid_points; ++i) grid.push_back(double(i) / (grid_points - 1));
    const auto pts = simulate_grid(code, grid, grid_trials, 777);
    double integral = 0.0, var_int = 0.0;
    for (int i = 0; i + 1 < grid_points; ++i) {
        const double pa = double(pts[i].block_failures) / grid_trials;
        const double pb = double(pts[i + 1].block_failures) / grid_trials;
        integral += 0.5 * (pa + pb) * (grid[i + 1] - grid[i]);
    }
    for (int i = 0; i < grid_points; ++i) {
        const double w = (i == 0 || i + 1 == grid_points ? 0.5 : 1.0) / (grid_points - 1);
        const double ph = double(pts[i].block_failures) / grid_trials;
        var_int += w * w * ph * (1.0 - ph) / grid_trials;
    }
    const double lhs = rep.mu_mean - 1.0;
    const double se = std::sqrt(rep.std_error * rep.std_error + var_int);
    const double gap = std::abs(lhs - integral);
    c.require(rep.incomplete == 0, "no incomplete trials");
    c.require(gap <= 3.0 * se, "|mu_m-1 - integral| = " + fmt("%.4f", gap) + " <= 3*SE = " + fmt("%.4f", 3 * se) +
                                   "  (mu_m-1 = " + fmt("%.4f", lhs) + ", integral = " + fmt("%.4f", integral) + ")");
    // diagnostic: the exact finite-N identity integral = E[K]/(Np+1)
    const double exact_rhs = rep.mu_mean * rep.k_bin / double(np + 1);
    std::printf("  [c9 diagnostic] exact identity check: integral %.4f vs E[K]/(Np+1) %.4f (K_bin=%d, Np=%ld)\n",
                integral, exact_rhs, rep.k_bin, np);
    const double secs = now_seconds(t0);
    c.require(secs < 900.0, "runtime " + fmt("%.1f", secs) + "s < 900s");
    return c;
}

// Criterion 10: finite-N waterfall at N = 3000 straddles the threshold.
Check criterion10() {
    Check c;
    FieldSpec gf4(2);
    LdpcCode code = sample_code(gf4, 3000, kDeg23, LabelPdf::uniform(gf4, LabelKind::field_unit), 13);
    const int trials = 400;
    const auto pts = simulate_grid(code, {0.45, 0.65}, trials, 31337);
    const double lo = double(pts[0].block_failures) / trials;
    const double hi = double(pts[1].block_failures) / trials;
    c.require(lo < 0.1, "failure rate " + fmt("%.3f", lo) + " < 0.1 at eps = 0.45");
    c.require(hi > 0.9, "failure rate " + fmt("%.3f", hi) + " > 0.9 at eps = 0.65");
    std::printf("  [c10 diagnostic] residual symbol-erasure rate at 0.45: %.5f (failures are isolated stopping sets)\n",
                double(pts[0].residual_bit_erasures) / 2.0 / trials / code.n());
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    const std::map<std::string, std::function<Check()>> criteria{
        {"c1", criterion1}, {"c2", criterion2}, {"c3", criterion3}, {"c4", criterion4},
        {"c5", criterion5}, {"c6", criterion6}, {"c7", criterion7}, {"c8", criterion8},
        {"c9", criterion9}, {"c10", criterion10},
    };
    std::vector<std::string> to_run;
    if (argc < 2 || std::strcmp(argv[1], "all") == 0) {
        for (const auto& [name, fn] : criteria) to_run.push_back(name);
        std::sort(to_run.begin(), to_run.end(), [](const std::string& a, const std::string& b) {
            return std::stoi(a.substr(1)) < std::stoi(b.substr(1));
        });
    } else {
        for (int i = 1; i < argc; ++i) to_run.push_back(argv[i]);
    }
    int failures = 0;
    for (const std::string& name : to_run) {
        auto it = criteria.find(name);
        if (it == criteria.end()) {
            std::printf("unknown criterion: %s\n", name.c_str());
            return 2;
        }
        const Check c = it->second();
        std::printf("%s %s: %s\n", c.ok ? "PASS" : "FAIL", name.c_str(), c.detail.c_str());
        std::fflush(stdout);
        failures += !c.ok;
    }
    return failures == 0 ? 0 : 1;
}
