#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "nbldpc/ensemble.hpp"
#include "nbldpc/subspace.hpp"

namespace nbldpc {

/// Probability mass function over the enumerated Grassmannian; the density
/// evolution state. Entries align with Grassmannian indices.
using SubspaceDist = std::vector<double>;

/// Precomputed tables tying a label pdf to the Grassmannian of a field:
/// sum / intersection composition of subspaces and the label action, all by
/// index. Immutable; build once per ensemble and share.
class DeContext {
  public:
    DeContext(const FieldSpec& spec, const LabelPdf& pdf);

    const FieldSpec& spec() const { return spec_; }
    const Field& field() const { return field_; }
    const Grassmannian& grassmannian() const { return gr_; }
    const LabelPdf& pdf() const { return pdf_; }
    std::size_t size() const { return gr_.size(); }

    std::size_t sum_index(std::size_t i, std::size_t j) const { return sum_[i * gr_.size() + j]; }
    std::size_t intersect_index(std::size_t i, std::size_t j) const { return int_[i * gr_.size() + j]; }
    /// index of h_k V_i / h_k^{-1} V_i for support entry k
    std::size_t act_index(std::size_t k, std::size_t i) const { return act_[k * gr_.size() + i]; }
    std::size_t act_inv_index(std::size_t k, std::size_t i) const { return act_inv_[k * gr_.size() + i]; }

  private:
    FieldSpec spec_;
    Field field_;
    LabelPdf pdf_;
    Grassmannian gr_;
    std::vector<std::uint16_t> sum_;
    std::vector<std::uint16_t> int_;
    std::vector<std::uint16_t> act_;
    std::vector<std::uint16_t> act_inv_;
};

/// gamma(V) = Pr(a-priori set = V) on BEC(epsilon): mass eps^k (1-eps)^(p-k)
/// on the span of each k-subset of the standard basis, 0 elsewhere.
SubspaceDist gamma_dist(const DeContext& ctx, double epsilon);

enum class PushDirection { forward, inverse };

/// Law of hV (forward: out(V) = sum_h f(h) dist(h^{-1}V)) or of h^{-1}V
/// (inverse: out(V) = sum_h f(h) dist(hV)) with h drawn from the pdf.
SubspaceDist scale_push(const DeContext& ctx, const SubspaceDist& dist, PushDirection dir);

/// out(V) = sum over V1 + V2 = V of a(V1) b(V2).
SubspaceDist check_convolve(const DeContext& ctx, const SubspaceDist& a, const SubspaceDist& b);

/// out(V) = sum over V1 ^ V2 = V of a(V1) b(V2).
SubspaceDist variable_convolve(const DeContext& ctx, const SubspaceDist& a, const SubspaceDist& b);

struct DeIterationResult {
    SubspaceDist q_next;
    SubspaceDist p_next;
};

/// One full density evolution round: check side Q <- sum_d rho_d Q^{(d-1)}
/// built from pushed-forward P by iterated sum-convolution (Q^{(0)} = point
/// mass on {0}), then variable side P <- sum_d lambda_d P^{(d-1)} built from
/// gamma and pushed-back Q by iterated intersection-convolution.
DeIterationResult de_iteration(const DeContext& ctx, const DegreeDist& dd, const SubspaceDist& gamma,
                               const SubspaceDist& p);

/// Brute-force form of de_iteration that enumerates label and subspace
/// tuples directly; test oracle for the convolution factorization. Rejects
/// instances whose tuple count exceeds an internal budget.
DeIterationResult de_iteration_direct(const DeContext& ctx, const DegreeDist& dd, const SubspaceDist& gamma,
                                      const SubspaceDist& p);

struct DeOptions {
    int max_de_iters = 200000;
    double convergence_delta = 1e-9;
    double bisection_tolerance = 1e-5;
    // stagnation: relative change of P({0}) below this for 10 consecutive
    // iterations means the recursion has settled short of success
    double stagnation_rel = 1e-12;
    int stagnation_window = 10;
};

enum class EvolveVerdict { converged, stagnated, budget_exhausted };

struct EvolveResult {
    bool converged = false;
    EvolveVerdict verdict = EvolveVerdict::budget_exhausted;
    int iterations = 0;
    SubspaceDist final_p;
};

/// Full ensemble description for threshold queries.
struct ThresholdQuery {
    FieldSpec spec;
    DegreeDist degrees;
    LabelPdf pdf;
    DeOptions options{};
};

/// Iterates density evolution from P0 = gamma(epsilon) until P({0}) exceeds
/// 1 - convergence_delta, the budget runs out, or the recursion stagnates.
EvolveResult evolve(const DeContext& ctx, const DegreeDist& dd, double epsilon, const DeOptions& opts = {});

/// Largest erasure probability driving P to the point mass on {0}, located
/// by bisection over [0, 1].
double threshold(const ThresholdQuery& query);
double threshold(const DeContext& ctx, const DegreeDist& dd, const DeOptions& opts = {});

/// Conjugation-collapsed recursion (valid for f uniform over the full
/// group): the persistent state holds one value per orbit of the label
/// group on the Grassmannian. For the invertible-matrix group the orbits
/// are exactly the dimensions 0..p. Throws if the pdf is not uniform.
class ReducedDe {
  public:
    ReducedDe(const FieldSpec& spec, const LabelPdf& pdf);

    std::size_t state_size() const { return classes_.members.size(); }
    const ConjugationClasses& classes() const { return classes_; }
    const DeContext& context() const { return ctx_; }

    EvolveResult evolve(const DegreeDist& dd, double epsilon, const DeOptions& opts = {}) const;
    double threshold(const DegreeDist& dd, const DeOptions& opts = {}) const;

  private:
    DeContext ctx_;
    ConjugationClasses classes_;
};

struct SurfacePoint {
    std::vector<double> f;  // probability per support label
    double threshold;
};

/// Threshold as a function of the label pdf over the 2-simplex (|L| = 3):
/// sweeps f1, f2 on a grid with `resolution` points per axis, f3 implicit.
/// Runs grid points in parallel on `jobs` threads.
std::vector<SurfacePoint> threshold_surface(const FieldSpec& spec, const DegreeDist& dd,
                                            const std::vector<Label>& labels, int resolution,
                                            const DeOptions& opts = {}, int jobs = 0);

/// Same sweep over an explicit list of pdf points (general |L|).
std::vector<SurfacePoint> threshold_surface_points(const FieldSpec& spec, const DegreeDist& dd,
                                                   const std::vector<Label>& labels,
                                                   const std::vector<std::vector<double>>& points,
                                                   const DeOptions& opts = {}, int jobs = 0);

}  // namespace nbldpc
