#include "nbldpc/density_evolution.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "nbldpc/parallel.hpp"

namespace nbldpc {

DeContext::DeContext(const FieldSpec& spec, const LabelPdf& pdf)
    : spec_(spec), field_(spec), pdf_(pdf), gr_(spec) {
    const std::size_t g = gr_.size();
    sum_.resize(g * g);
    int_.resize(g * g);
    for (std::size_t i = 0; i < g; ++i) {
        for (std::size_t j = 0; j < g; ++j) {
            sum_[i * g + j] = std::uint16_t(gr_.index_of(sum(gr_[i], gr_[j])));
            int_[i * g + j] = std::uint16_t(gr_.index_of(intersect(gr_[i], gr_[j])));
        }
    }
    const std::size_t s = pdf_.support().size();
    act_.resize(s * g);
    act_inv_.resize(s * g);
    for (std::size_t k = 0; k < s; ++k) {
        const Label& h = pdf_.support()[k].first;
        const Label hinv = invert_label(field_, h);
        for (std::size_t i = 0; i < g; ++i) {
            act_[k * g + i] = std::uint16_t(gr_.index_of(act(field_, h, gr_[i])));
            act_inv_[k * g + i] = std::uint16_t(gr_.index_of(act(field_, hinv, gr_[i])));
        }
    }
}

SubspaceDist gamma_dist(const DeContext& ctx, double epsilon) {
    if (epsilon < 0.0 || epsilon > 1.0) throw std::invalid_argument("epsilon must lie in [0,1]");
    const int p = ctx.spec().p;
    SubspaceDist out(ctx.size(), 0.0);
    for (int mask = 0; mask < (1 << p); ++mask) {
        std::vector<Symbol> gens;
        for (int i = 0; i < p; ++i) {
            if (mask >> i & 1) gens.push_back(Symbol(1u << i));
        }
        const int k = std::popcount(unsigned(mask));
        out[ctx.grassmannian().index_of(Subspace::span(p, gens))] +=
            std::pow(epsilon, k) * std::pow(1.0 - epsilon, p - k);
    }
    return out;
}

SubspaceDist scale_push(const DeContext& ctx, const SubspaceDist& dist, PushDirection dir) {
    const std::size_t g = ctx.size();
    SubspaceDist out(g, 0.0);
    const auto& support = ctx.pdf().support();
    for (std::size_t k = 0; k < support.size(); ++k) {
        const double fh = support[k].second;
        if (fh == 0.0) continue;
        for (std::size_t v = 0; v < g; ++v) {
            // forward computes the law of hV: out(V) += f(h) dist(h^{-1}V)
            const std::size_t src = dir == PushDirection::forward ? ctx.act_inv_index(k, v) : ctx.act_index(k, v);
            out[v] += fh * dist[src];
        }
    }
    return out;
}

namespace {

SubspaceDist convolve(const DeContext& ctx, const SubspaceDist& a, const SubspaceDist& b, bool check_side) {
    const std::size_t g = ctx.size();
    SubspaceDist out(g, 0.0);
    for (std::size_t i = 0; i < g; ++i) {
        const double ai = a[i];
        if (ai == 0.0) continue;
        for (std::size_t j = 0; j < g; ++j) {
            const std::size_t t = check_side ? ctx.sum_index(i, j) : ctx.intersect_index(i, j);
            out[t] += ai * b[j];
        }
    }
    return out;
}

}  // namespace

SubspaceDist check_convolve(const DeContext& ctx, const SubspaceDist& a, const SubspaceDist& b) {
    return convolve(ctx, a, b, true);
}

SubspaceDist variable_convolve(const DeContext& ctx, const SubspaceDist& a, const SubspaceDist& b) {
    return convolve(ctx, a, b, false);
}

DeIterationResult de_iteration(const DeContext& ctx, const DegreeDist& dd, const SubspaceDist& gamma,
                               const SubspaceDist& p) {
    const std::size_t g = ctx.size();
    DeIterationResult res;
    res.q_next.assign(g, 0.0);
    res.p_next.assign(g, 0.0);

    const SubspaceDist pushed_p = scale_push(ctx, p, PushDirection::forward);
    SubspaceDist cur(g, 0.0);
    cur[ctx.grassmannian().zero_index()] = 1.0;  // Q^{(0)}: empty sum is {0}
    for (int d = 1; d <= dd.d_c(); ++d) {
        if (d > 1) cur = check_convolve(ctx, cur, pushed_p);
        auto it = dd.rho().find(d);
        if (it != dd.rho().end()) {
            for (std::size_t v = 0; v < g; ++v) res.q_next[v] += it->second * cur[v];
        }
    }

    const SubspaceDist pushed_q = scale_push(ctx, res.q_next, PushDirection::inverse);
    cur = gamma;  // P^{(0)}: a degree-1 variable repeats its a-priori set
    for (int d = 1; d <= dd.d_v(); ++d) {
        if (d > 1) cur = variable_convolve(ctx, cur, pushed_q);
        auto it = dd.lambda().find(d);
        if (it != dd.lambda().end()) {
            for (std::size_t v = 0; v < g; ++v) res.p_next[v] += it->second * cur[v];
        }
    }
    return res;
}

namespace {

// Enumerates (h_1..h_I, V_1..V_I) tuples recursively, accumulating
// f(h) * prod dist(h^{-1} V_i) into out at the running sum/intersection.
struct DirectEnum {
    const DeContext& ctx;
    int depth;
    bool check_side;
    const SubspaceDist& dist;  // P for check side, Q for variable side
    SubspaceDist& out;

    void run(int level, std::size_t acc, double weight) {
        if (weight == 0.0) return;
        if (level == depth) {
            out[acc] += weight;
            return;
        }
        const auto& support = ctx.pdf().support();
        const std::size_t g = ctx.size();
        for (std::size_t k = 0; k < support.size(); ++k) {
            for (std::size_t v = 0; v < g; ++v) {
                // check side sums h_i V_i with V_i ~ P: weight is P(h^{-1}(h V)) = P(V),
                // accumulate at acc + (h V). Variable side intersects h^{-1} V with
                // V ~ Q: weight Q(V), accumulate at acc ^ (h^{-1} V).
                const std::size_t img = check_side ? ctx.act_index(k, v) : ctx.act_inv_index(k, v);
                const std::size_t nxt = check_side ? ctx.sum_index(acc, img) : ctx.intersect_index(acc, img);
                run(level + 1, nxt, weight * support[k].second * dist[v]);
            }
        }
    }
};

}  // namespace

DeIterationResult de_iteration_direct(const DeContext& ctx, const DegreeDist& dd, const SubspaceDist& gamma,
                                      const SubspaceDist& p) {
    const std::size_t g = ctx.size();
    const std::size_t per_level = ctx.pdf().support().size() * g;
    const int max_depth = std::max(dd.d_c(), dd.d_v()) - 1;
    double budget = 1.0;
    for (int i = 0; i < max_depth; ++i) budget *= double(per_level);
    if (budget > 5e7) throw std::invalid_argument("de_iteration_direct: instance exceeds enumeration budget");

    DeIterationResult res;
    res.q_next.assign(g, 0.0);
    res.p_next.assign(g, 0.0);

    for (const auto& [d, rho_d] : dd.rho()) {
        SubspaceDist qd(g, 0.0);
        DirectEnum en{ctx, d - 1, true, p, qd};
        en.run(0, ctx.grassmannian().zero_index(), 1.0);
        for (std::size_t v = 0; v < g; ++v) res.q_next[v] += rho_d * qd[v];
    }
    for (const auto& [d, lambda_d] : dd.lambda()) {
        SubspaceDist pd(g, 0.0);
        DirectEnum en{ctx, d - 1, false, res.q_next, pd};
        // seed the recursion with V_0 ~ gamma
        for (std::size_t v0 = 0; v0 < g; ++v0) en.run(0, v0, gamma[v0]);
        for (std::size_t v = 0; v < g; ++v) res.p_next[v] += lambda_d * pd[v];
    }
    return res;
}

namespace {

// The recursion is multiplicative in total mass, so float drift compounds
// exponentially across thousands of iterations; rescale to total mass 1
// after checking the invariant held to tolerance.
void renormalize(SubspaceDist& d) {
    double total = 0.0;
    for (double& v : d) {
        if (v < 0.0) {
            if (v < -1e-12) throw std::logic_error("density evolution produced negative mass");
            v = 0.0;
        }
        total += v;
    }
    if (std::abs(total - 1.0) > 1e-9) throw std::logic_error("density evolution lost probability mass");
    for (double& v : d) v /= total;
}

}  // namespace

EvolveResult evolve(const DeContext& ctx, const DegreeDist& dd, double epsilon, const DeOptions& opts) {
    const SubspaceDist gamma = gamma_dist(ctx, epsilon);
    const std::size_t zero = ctx.grassmannian().zero_index();
    EvolveResult res;
    res.final_p = gamma;
    // Stagnation is tracked on the residual 1 - P({0}): near success P({0})
    // sits against 1.0 where relative changes underflow long before the
    // residual stops shrinking, which would misread slow convergence as a
    // stall.
    double last = 1.0 - res.final_p[zero];
    int stagnant = 0;
    for (int it = 1; it <= opts.max_de_iters; ++it) {
        res.final_p = de_iteration(ctx, dd, gamma, res.final_p).p_next;
        renormalize(res.final_p);
        res.iterations = it;
        const double residual = 1.0 - res.final_p[zero];
        if (residual < opts.convergence_delta) {
            res.converged = true;
            res.verdict = EvolveVerdict::converged;
            return res;
        }
        stagnant = std::abs(residual - last) < opts.stagnation_rel * std::max(residual, 1e-300) ? stagnant + 1 : 0;
        last = residual;
        if (stagnant >= opts.stagnation_window) {
            res.verdict = EvolveVerdict::stagnated;
            return res;
        }
    }
    res.verdict = EvolveVerdict::budget_exhausted;
    return res;
}

namespace {

double bisect_threshold(const std::function<bool(double)>& converges, double tol) {
    double lo = 0.0, hi = 1.0;
    if (converges(1.0)) return 1.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (converges(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double threshold(const DeContext& ctx, const DegreeDist& dd, const DeOptions& opts) {
    return bisect_threshold(
        [&](double eps) { return evolve(ctx, dd, eps, opts).converged; }, opts.bisection_tolerance);
}

double threshold(const ThresholdQuery& query) {
    DeContext ctx(query.spec, query.pdf);
    return threshold(ctx, query.degrees, query.options);
}

ReducedDe::ReducedDe(const FieldSpec& spec, const LabelPdf& pdf) : ctx_(spec, pdf) {
    if (!pdf.is_uniform_over_group(spec))
        throw std::invalid_argument("conjugation reduction requires f uniform over the full label group");
    std::vector<Label> labels;
    labels.reserve(pdf.support().size());
    for (const auto& [h, prob] : pdf.support()) labels.push_back(h);
    classes_ = conjugation_classes(ctx_.field(), ctx_.grassmannian(), labels);
}

EvolveResult ReducedDe::evolve(const DegreeDist& dd, double epsilon, const DeOptions& opts) const {
    const SubspaceDist gamma = gamma_dist(ctx_, epsilon);
    const std::size_t zero = ctx_.grassmannian().zero_index();
    const std::size_t g = ctx_.size();

    // Persistent state: one value per conjugation class (the class average
    // of P). Uniform f only ever reads P through its orbit averages, so the
    // collapsed recursion reproduces the full one exactly.
    std::vector<double> state(state_size());
    auto collapse = [&](const SubspaceDist& p) {
        for (std::size_t c = 0; c < classes_.members.size(); ++c) {
            double s = 0.0;
            for (std::size_t v : classes_.members[c]) s += p[v];
            state[c] = s / double(classes_.members[c].size());
        }
    };
    auto lift = [&]() {
        SubspaceDist p(g);
        for (std::size_t v = 0; v < g; ++v) p[v] = state[classes_.class_of[v]];
        return p;
    };

    collapse(gamma);
    EvolveResult res;
    double last = 1.0 - state[classes_.class_of[zero]];
    int stagnant = 0;
    for (int it = 1; it <= opts.max_de_iters; ++it) {
        SubspaceDist p = de_iteration(ctx_, dd, gamma, lift()).p_next;
        renormalize(p);
        collapse(p);
        res.iterations = it;
        const double residual = 1.0 - state[classes_.class_of[zero]];
        if (residual < opts.convergence_delta) {
            res.converged = true;
            res.verdict = EvolveVerdict::converged;
            res.final_p = lift();
            return res;
        }
        stagnant = std::abs(residual - last) < opts.stagnation_rel * std::max(residual, 1e-300) ? stagnant + 1 : 0;
        last = residual;
        if (stagnant >= opts.stagnation_window) {
            res.verdict = EvolveVerdict::stagnated;
            res.final_p = lift();
            return res;
        }
    }
    res.verdict = EvolveVerdict::budget_exhausted;
    res.final_p = lift();
    return res;
}

double ReducedDe::threshold(const DegreeDist& dd, const DeOptions& opts) const {
    return bisect_threshold(
        [&](double eps) { return evolve(dd, eps, opts).converged; }, opts.bisection_tolerance);
}

std::vector<SurfacePoint> threshold_surface_points(const FieldSpec& spec, const DegreeDist& dd,
                                                   const std::vector<Label>& labels,
                                                   const std::vector<std::vector<double>>& points,
                                                   const DeOptions& opts, int jobs) {
    std::vector<SurfacePoint> out(points.size());
    parallel_for(
        points.size(),
        [&](std::size_t i) {
            if (points[i].size() != labels.size())
                throw std::invalid_argument("surface point size does not match label list");
            std::vector<std::pair<Label, double>> support;
            for (std::size_t k = 0; k < labels.size(); ++k) support.emplace_back(labels[k], points[i][k]);
            LabelPdf pdf(std::move(support), spec);
            DeContext ctx(spec, pdf);
            out[i] = SurfacePoint{points[i], threshold(ctx, dd, opts)};
        },
        jobs);
    return out;
}

std::vector<SurfacePoint> threshold_surface(const FieldSpec& spec, const DegreeDist& dd,
                                            const std::vector<Label>& labels, int resolution,
                                            const DeOptions& opts, int jobs) {
    if (labels.size() != 3)
        throw std::invalid_argument("simplex surface sweep needs exactly 3 labels; use explicit points otherwise");
    if (resolution < 2) throw std::invalid_argument("surface resolution must be at least 2 points per axis");
    std::vector<std::vector<double>> points;
    for (int i = 0; i < resolution; ++i) {
        for (int j = 0; i + j < resolution; ++j) {
            const double f1 = double(i) / (resolution - 1);
            const double f2 = double(j) / (resolution - 1);
            points.push_back({f1, f2, 1.0 - f1 - f2});
        }
    }
    // guard against -0 / tiny negative third coordinates on the simplex edge
    for (auto& pt : points) {
        if (pt[2] < 0) pt[2] = 0;
    }
    return threshold_surface_points(spec, dd, labels, points, opts, jobs);
}

}  // namespace nbldpc
