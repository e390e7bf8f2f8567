#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "nbldpc/galois.hpp"

namespace nbldpc {

/// GF(2)-linear subspace of GF(2^p) in canonical (reduced row echelon) form:
/// rows ordered by decreasing pivot bit, each pivot bit appearing in exactly
/// one row. Equal subspaces have identical encodings.
class Subspace {
  public:
    explicit Subspace(int p) : p_(std::uint8_t(p)) {}
    static Subspace span(int p, const std::vector<Symbol>& gens);
    static Subspace full(int p);

    int p() const { return p_; }
    int dim() const { return dim_; }
    std::size_t cardinality() const { return std::size_t(1) << dim_; }
    Symbol row(int i) const { return rows_[i]; }

    /// XORs away every basis row whose pivot bit is set in v; the result is
    /// zero iff v is in the subspace.
    Symbol reduce(Symbol v) const;
    bool contains(Symbol v) const { return reduce(v) == 0; }

    /// Adds v to the basis; returns false if v was already in the span.
    bool insert(Symbol v);

    /// All 2^dim elements, in no particular order (test oracle use).
    std::vector<Symbol> elements() const;

    /// Packs the basis rows into one integer; unique per subspace for p <= 8.
    std::uint64_t key() const;

    bool operator==(const Subspace& other) const = default;

  private:
    std::uint8_t p_;
    std::uint8_t dim_ = 0;
    std::array<Symbol, 8> rows_{};  // descending pivot order
};

Subspace sum(const Subspace& a, const Subspace& b);
Subspace intersect(const Subspace& a, const Subspace& b);
Subspace act(const Field& field, const Label& h, const Subspace& v);

/// Affine GF(2)-subspace offset + direction, or the distinguished empty set
/// (a legitimate intersection result, not an error). The offset is the
/// unique coset representative with zeros in all pivot coordinates.
class AffineSet {
  public:
    AffineSet(Symbol offset, Subspace direction);
    static AffineSet empty(int p);
    static AffineSet singleton(int p, Symbol s) { return AffineSet(s, Subspace(p)); }
    static AffineSet full(int p) { return AffineSet(0, Subspace::full(p)); }

    bool is_empty() const { return empty_; }
    bool is_singleton() const { return !empty_ && dir_.dim() == 0; }
    int p() const { return dir_.p(); }
    Symbol offset() const { return offset_; }
    const Subspace& direction() const { return dir_; }
    std::size_t cardinality() const { return empty_ ? 0 : dir_.cardinality(); }

    bool contains(Symbol s) const { return !empty_ && dir_.contains(Symbol(s ^ offset_)); }
    std::vector<Symbol> elements() const;

    bool operator==(const AffineSet& other) const = default;

  private:
    AffineSet(int p, bool) : offset_(0), dir_(p), empty_(true) {}

    Symbol offset_;
    Subspace dir_;
    bool empty_;
};

/// Elementwise sum { a + b }; empty absorbs.
AffineSet sum(const AffineSet& a, const AffineSet& b);
/// Exact set intersection; may be empty.
AffineSet intersect(const AffineSet& a, const AffineSet& b);
/// Image { h s }; a GF(2)-linear bijection, so cardinality is preserved.
AffineSet act(const Field& field, const Label& h, const AffineSet& a);
/// Restriction to { s : constituent bit `pos` of s equals `value` }.
AffineSet restrict_bit(const AffineSet& a, int pos, int value);

/// The set of all GF(2)-linear subspaces of GF(2^p), enumerated once and
/// indexed canonically (by dimension, then packed basis). Sizes follow the
/// Galois numbers: 2, 5, 16, 67 for p = 1..4.
class Grassmannian {
  public:
    explicit Grassmannian(FieldSpec spec);

    const FieldSpec& spec() const { return spec_; }
    std::size_t size() const { return spaces_.size(); }
    const Subspace& operator[](std::size_t i) const { return spaces_[i]; }
    std::size_t index_of(const Subspace& v) const;
    std::size_t zero_index() const { return 0; }
    std::size_t full_index() const { return spaces_.size() - 1; }

  private:
    FieldSpec spec_;
    std::vector<Subspace> spaces_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
};

Grassmannian enumerate_grassmannian(const FieldSpec& spec);

/// Orbits of the Grassmannian under V -> hV over the full label group.
struct ConjugationClasses {
    std::vector<std::size_t> class_of;           // subspace index -> class id
    std::vector<std::vector<std::size_t>> members;  // class id -> subspace indices
};

ConjugationClasses conjugation_classes(const Field& field, const Grassmannian& gr,
                                       const std::vector<Label>& labels);

}  // namespace nbldpc
