#include "nbldpc/ensemble.hpp"

#include <cmath>
#include <stdexcept>

namespace nbldpc {

namespace {

void check_dist(const std::map<int, double>& coeffs, const char* name) {
    if (coeffs.empty()) throw std::invalid_argument(std::string(name) + ": empty distribution");
    double total = 0.0;
    for (const auto& [d, c] : coeffs) {
        if (d < 1) throw std::invalid_argument(std::string(name) + ": degrees start at 1");
        if (c < 0) throw std::invalid_argument(std::string(name) + ": negative coefficient");
        total += c;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument(std::string(name) + ": coefficients must sum to 1");
}

}  // namespace

DegreeDist::DegreeDist(std::map<int, double> lambda, std::map<int, double> rho)
    : lambda_(std::move(lambda)), rho_(std::move(rho)) {
    check_dist(lambda_, "lambda");
    check_dist(rho_, "rho");
    const double r = design_rate();
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("degree distributions give design rate outside (0,1)");
}

double DegreeDist::lambda_integral() const {
    double s = 0.0;
    for (const auto& [d, c] : lambda_) s += c / d;
    return s;
}

double DegreeDist::rho_integral() const {
    double s = 0.0;
    for (const auto& [d, c] : rho_) s += c / d;
    return s;
}

LabelPdf::LabelPdf(std::vector<std::pair<Label, double>> support, const FieldSpec& spec)
    : support_(std::move(support)) {
    if (support_.empty()) throw std::invalid_argument("label pdf: empty support");
    kind_ = support_.front().first.kind;
    double total = 0.0;
    for (std::size_t i = 0; i < support_.size(); ++i) {
        const auto& [h, prob] = support_[i];
        if (h.kind != kind_) throw std::invalid_argument("label pdf: mixed label kinds");
        if (prob < 0) throw std::invalid_argument("label pdf: negative probability");
        if (kind_ == LabelKind::field_unit && (h.unit == 0 || h.unit >= spec.q()))
            throw std::invalid_argument("label pdf: field-unit label out of range");
        for (std::size_t j = 0; j < i; ++j) {
            if (support_[j].first == h) throw std::invalid_argument("label pdf: duplicate label");
        }
        total += prob;
    }
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("label pdf: probabilities must sum to 1");
    // absorb the rounding residue so downstream products stay mass-preserving
    for (auto& [h, prob] : support_) prob /= total;
}

LabelPdf LabelPdf::uniform(const FieldSpec& spec, LabelKind kind) {
    std::vector<Label> group = enumerate_label_group(spec, kind);
    std::vector<std::pair<Label, double>> support;
    support.reserve(group.size());
    for (const Label& h : group) support.emplace_back(h, 1.0 / group.size());
    return LabelPdf(std::move(support), spec);
}

LabelPdf LabelPdf::concentrated(const FieldSpec& spec, const Label& h) {
    return LabelPdf({{h, 1.0}}, spec);
}

bool LabelPdf::is_uniform_over_group(const FieldSpec& spec) const {
    std::vector<Label> group;
    try {
        group = enumerate_label_group(spec, kind_);
    } catch (const std::invalid_argument&) {
        return false;
    }
    if (support_.size() != group.size()) return false;
    for (const auto& [h, prob] : support_) {
        if (std::abs(prob - 1.0 / group.size()) > 1e-9) return false;
    }
    return true;
}

}  // namespace nbldpc
