#pragma once

#include <map>
#include <vector>

#include "nbldpc/galois.hpp"

namespace nbldpc {

/// Edge-perspective degree distributions: lambda_d / rho_d is the fraction
/// of edges attached to degree-d variable / check nodes.
class DegreeDist {
  public:
    DegreeDist(std::map<int, double> lambda, std::map<int, double> rho);

    const std::map<int, double>& lambda() const { return lambda_; }
    const std::map<int, double>& rho() const { return rho_; }
    int d_v() const { return lambda_.rbegin()->first; }
    int d_c() const { return rho_.rbegin()->first; }

    /// sum_d lambda_d / d (edge-perspective integral); likewise for rho.
    double lambda_integral() const;
    double rho_integral() const;
    double design_rate() const { return 1.0 - rho_integral() / lambda_integral(); }

  private:
    std::map<int, double> lambda_;
    std::map<int, double> rho_;
};

/// Probability distribution over edge labels; support entries are distinct
/// invertible labels with nonnegative probabilities summing to 1.
class LabelPdf {
  public:
    LabelPdf(std::vector<std::pair<Label, double>> support, const FieldSpec& spec);

    static LabelPdf uniform(const FieldSpec& spec, LabelKind kind);
    /// Point mass on a single label.
    static LabelPdf concentrated(const FieldSpec& spec, const Label& h);

    const std::vector<std::pair<Label, double>>& support() const { return support_; }
    LabelKind kind() const { return kind_; }
    /// True iff the support is the whole group with equal probabilities.
    bool is_uniform_over_group(const FieldSpec& spec) const;

  private:
    std::vector<std::pair<Label, double>> support_;
    LabelKind kind_;
};

}  // namespace nbldpc
