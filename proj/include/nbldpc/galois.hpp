#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace nbldpc {

using Symbol = std::uint16_t;

/// GF(2^p) with a fixed bit-vector identification: the symbol s corresponds
/// to the constituent bits (b_0,...,b_{p-1}) of its binary decomposition,
/// b_j being the coefficient of 2^j.
struct FieldSpec {
    int p = 1;
    std::uint32_t poly = 0;  // reduction polynomial, bit k = coefficient of x^k

    FieldSpec() = default;
    /// Uses the default (lexicographically smallest) irreducible polynomial.
    explicit FieldSpec(int p_);
    FieldSpec(int p_, std::uint32_t poly_);

    int q() const { return 1 << p; }
    bool operator==(const FieldSpec&) const = default;

    static std::uint32_t default_poly(int p);
    static bool is_irreducible(std::uint32_t poly);
};

/// Arithmetic tables for one FieldSpec. Immutable once built; share freely.
class Field {
  public:
    explicit Field(FieldSpec spec);

    const FieldSpec& spec() const { return spec_; }
    int p() const { return spec_.p; }
    int q() const { return 1 << spec_.p; }

    static Symbol add(Symbol a, Symbol b) { return a ^ b; }
    Symbol mul(Symbol a, Symbol b) const { return mul_[(std::size_t(a) << spec_.p) | b]; }
    /// Multiplicative inverse; a must be nonzero.
    Symbol inv(Symbol a) const { return inv_[a]; }

  private:
    FieldSpec spec_;
    std::vector<Symbol> mul_;
    std::vector<Symbol> inv_;
};

enum class LabelKind { field_unit, bin_matrix };

LabelKind label_kind_from_string(const std::string& s);
std::string to_string(LabelKind kind);

/// Edge label: an element of the label group acting on GF(2^p).
/// Either a nonzero field element (acting by multiplication) or an
/// invertible p x p matrix over GF(2) acting on the constituent bits.
/// Matrix rows are stored as bitmasks over the column index j.
struct Label {
    LabelKind kind = LabelKind::field_unit;
    Symbol unit = 1;
    std::array<std::uint8_t, 8> rows{};

    static Label make_unit(Symbol u);
    static Label make_matrix(const std::array<std::uint8_t, 8>& rows, int p);
    static Label identity(LabelKind kind, int p);

    bool operator==(const Label&) const = default;
};

/// (h, s) -> h s. Field units multiply; matrices act on the bit vector.
Symbol apply_label(const Field& field, const Label& h, Symbol s);

/// Group inverse: apply_label(invert_label(h), apply_label(h, s)) == s.
Label invert_label(const Field& field, const Label& h);

/// Composition in the group: apply(compose(a, b), s) == apply(a, apply(b, s)).
Label compose_labels(const Field& field, const Label& a, const Label& b);

/// Matrix of the GF(2)-linear map s -> h s; row i is a bitmask over j,
/// with entry (i, j) = bit i of h * 2^j. For bin_matrix labels this is
/// the stored matrix itself.
std::array<std::uint8_t, 8> label_action_rows(const Field& field, const Label& h);

/// Every element of the label group, each exactly once. bin_matrix
/// enumeration is rejected for p > 4 (group size explodes as 2^(p^2)).
std::vector<Label> enumerate_label_group(const FieldSpec& spec, LabelKind kind);

/// Serialized integer form used by the code file format: the field-unit
/// value, or the row-major bit pattern sum_{i,j} M[i][j] << (i*p + j).
std::uint64_t label_to_int(const Label& h, int p);
Label label_from_int(std::uint64_t v, int p, LabelKind kind);

}  // namespace nbldpc
