#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nbldpc/ensemble.hpp"

namespace nbldpc {

/// Sparse parity-check matrix over the label group together with its Tanner
/// graph adjacency. Immutable after construction.
class LdpcCode {
  public:
    struct Edge {
        int check;
        int variable;
        Label label;
    };

    LdpcCode(FieldSpec spec, LabelKind kind, int n, int m, std::vector<Edge> edges);

    const FieldSpec& field_spec() const { return spec_; }
    const Field& field() const { return field_; }
    LabelKind kind() const { return kind_; }
    int n() const { return n_; }
    int m() const { return m_; }
    int bit_length() const { return n_ * spec_.p; }
    const std::vector<Edge>& edges() const { return edges_; }
    /// Edge ids incident to a variable / check node.
    const std::vector<int>& variable_edges(int n) const { return var_edges_[n]; }
    const std::vector<int>& check_edges(int m) const { return chk_edges_[m]; }

  private:
    FieldSpec spec_;
    LabelKind kind_;
    Field field_;
    int n_;
    int m_;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> var_edges_;
    std::vector<std::vector<int>> chk_edges_;
};

/// Draws a code from the ensemble (N, lambda, rho, f): configuration-model
/// bipartite graph with the prescribed degree profile, parallel edges
/// resolved by local socket swaps, labels iid from the pdf. Deterministic
/// given the seed. The check-side profile absorbs at most one off-profile
/// check when the socket count forces it.
LdpcCode sample_code(const FieldSpec& spec, int n, const DegreeDist& degrees, const LabelPdf& pdf,
                     std::uint64_t seed);

/// Block expansion of the parity-check matrix: each label becomes the p x p
/// matrix of its action on the constituent bits.
class BinaryImage {
  public:
    explicit BinaryImage(const LdpcCode& code);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool get(int r, int c) const { return words_[std::size_t(r) * stride_ + c / 64] >> (c % 64) & 1; }
    int rank() const { return rank_; }
    int k_bin() const { return cols_ - rank_; }

  private:
    friend class Encoder;
    int rows_, cols_;
    std::size_t stride_;
    std::vector<std::uint64_t> words_;
    int rank_ = 0;
    // reduced row echelon form of the matrix, for solving
    std::vector<std::uint64_t> rref_;
    std::vector<int> pivot_cols_;
};

/// Systematic encoder over the binary image: message bits occupy the free
/// columns, parity bits are solved from the reduced parity-check rows.
class Encoder {
  public:
    explicit Encoder(const LdpcCode& code);

    int k_bin() const { return image_.k_bin(); }
    const BinaryImage& image() const { return image_; }
    /// message.size() must equal k_bin(); returns N symbols.
    std::vector<Symbol> encode(const std::vector<std::uint8_t>& message) const;

  private:
    const LdpcCode& code_;
    BinaryImage image_;
    std::vector<int> free_cols_;
};

bool verify_codeword(const LdpcCode& code, const std::vector<Symbol>& word);

/// Labeled alist-style code file: header "N M q group [poly]", then one
/// line per check with its degree and (1-based variable index, label) pairs.
/// Labels serialize as integers: the field-unit value, or the row-major bit
/// pattern of the matrix. The poly token appears only for non-default
/// reduction polynomials. Text, line-oriented, bit-exact.
void write_code(std::ostream& os, const LdpcCode& code);
LdpcCode read_code(std::istream& is);
void write_code_file(const std::string& path, const LdpcCode& code);
LdpcCode read_code_file(const std::string& path);

/// Ensemble description parsed from the JSON config document with fields
/// p, group, lambda, rho, f, seed (optional: poly, n).
struct EnsembleConfig {
    FieldSpec spec;
    LabelKind kind = LabelKind::field_unit;
    std::optional<DegreeDist> degrees;
    std::optional<LabelPdf> pdf;
    std::uint64_t seed = 0;
    int n = 0;
};

EnsembleConfig parse_ensemble_config(const std::string& json_text);

}  // namespace nbldpc
