#include "nbldpc/galois.hpp"

#include <bit>
#include <stdexcept>

namespace nbldpc {

namespace {

int poly_degree(std::uint32_t poly) {
    return poly == 0 ? -1 : 31 - std::countl_zero(poly);
}

// Remainder of polynomial division over GF(2).
std::uint32_t poly_mod(std::uint32_t a, std::uint32_t m) {
    int dm = poly_degree(m);
    for (int d = poly_degree(a); d >= dm; d = poly_degree(a)) {
        a ^= m << (d - dm);
    }
    return a;
}

}  // namespace

bool FieldSpec::is_irreducible(std::uint32_t poly) {
    int d = poly_degree(poly);
    if (d < 1) return false;
    if (d == 1) return true;
    // Trial division by every polynomial of degree 1..d/2.
    for (int e = 1; 2 * e <= d; ++e) {
        for (std::uint32_t f = (1u << e); f < (2u << e); ++f) {
            if (poly_mod(poly, f) == 0) return false;
        }
    }
    return true;
}

std::uint32_t FieldSpec::default_poly(int p) {
    if (p < 1 || p > 8) throw std::invalid_argument("FieldSpec: p must be in 1..8");
    for (std::uint32_t poly = (1u << p); poly < (2u << p); ++poly) {
        if (is_irreducible(poly)) return poly;
    }
    throw std::logic_error("no irreducible polynomial found");  // unreachable
}

FieldSpec::FieldSpec(int p_) : FieldSpec(p_, default_poly(p_)) {}

FieldSpec::FieldSpec(int p_, std::uint32_t poly_) : p(p_), poly(poly_) {
    if (p < 1 || p > 8) throw std::invalid_argument("FieldSpec: p must be in 1..8");
    if (poly_degree(poly) != p) throw std::invalid_argument("FieldSpec: reduction polynomial must have degree p");
    if (!is_irreducible(poly)) throw std::invalid_argument("FieldSpec: reduction polynomial is reducible");
}

Field::Field(FieldSpec spec) : spec_(spec) {
    const int n = 1 << spec_.p;
    mul_.assign(std::size_t(n) * n, 0);
    inv_.assign(n, 0);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            // carry-less multiply, then reduce
            std::uint32_t acc = 0;
            for (int k = 0; k < spec_.p; ++k) {
                if (b >> k & 1) acc ^= std::uint32_t(a) << k;
            }
            mul_[(std::size_t(a) << spec_.p) | b] = Symbol(poly_mod(acc, spec_.poly));
        }
    }
    for (int a = 1; a < n; ++a) {
        for (int b = 1; b < n; ++b) {
            if (mul(Symbol(a), Symbol(b)) == 1) {
                inv_[a] = Symbol(b);
                break;
            }
        }
    }
}

Label Label::make_unit(Symbol u) {
    if (u == 0) throw std::invalid_argument("field-unit label must be nonzero");
    Label h;
    h.kind = LabelKind::field_unit;
    h.unit = u;
    return h;
}

namespace {

// Rank of a p x p bit matrix given as row bitmasks.
int row_rank(std::array<std::uint8_t, 8> rows, int p) {
    int rank = 0;
    for (int col = 0; col < p; ++col) {
        int piv = -1;
        for (int r = rank; r < p; ++r) {
            if (rows[r] >> col & 1) { piv = r; break; }
        }
        if (piv < 0) continue;
        std::swap(rows[rank], rows[piv]);
        for (int r = 0; r < p; ++r) {
            if (r != rank && (rows[r] >> col & 1)) rows[r] ^= rows[rank];
        }
        ++rank;
    }
    return rank;
}

}  // namespace

Label Label::make_matrix(const std::array<std::uint8_t, 8>& rows, int p) {
    if (row_rank(rows, p) != p) throw std::invalid_argument("bin-matrix label must be invertible");
    Label h;
    h.kind = LabelKind::bin_matrix;
    h.unit = 0;
    h.rows = rows;
    for (int i = p; i < 8; ++i) h.rows[i] = 0;
    for (int i = 0; i < p; ++i) h.rows[i] &= std::uint8_t((1u << p) - 1);
    return h;
}

Label Label::identity(LabelKind kind, int p) {
    if (kind == LabelKind::field_unit) return make_unit(1);
    std::array<std::uint8_t, 8> rows{};
    for (int i = 0; i < p; ++i) rows[i] = std::uint8_t(1u << i);
    return make_matrix(rows, p);
}

Symbol apply_label(const Field& field, const Label& h, Symbol s) {
    if (h.kind == LabelKind::field_unit) return field.mul(h.unit, s);
    Symbol out = 0;
    for (int i = 0; i < field.p(); ++i) {
        out |= Symbol((std::popcount(unsigned(h.rows[i] & s)) & 1) << i);
    }
    return out;
}

Label invert_label(const Field& field, const Label& h) {
    if (h.kind == LabelKind::field_unit) return Label::make_unit(field.inv(h.unit));
    // Gauss-Jordan on [M | I].
    const int p = field.p();
    std::array<std::uint8_t, 8> m = h.rows;
    std::array<std::uint8_t, 8> id{};
    for (int i = 0; i < p; ++i) id[i] = std::uint8_t(1u << i);
    for (int col = 0; col < p; ++col) {
        int piv = -1;
        for (int r = col; r < p; ++r) {
            if (m[r] >> col & 1) { piv = r; break; }
        }
        std::swap(m[col], m[piv]);
        std::swap(id[col], id[piv]);
        for (int r = 0; r < p; ++r) {
            if (r != col && (m[r] >> col & 1)) {
                m[r] ^= m[col];
                id[r] ^= id[col];
            }
        }
    }
    return Label::make_matrix(id, p);
}

Label compose_labels(const Field& field, const Label& a, const Label& b) {
    if (a.kind != b.kind) throw std::invalid_argument("cannot compose labels of different kinds");
    if (a.kind == LabelKind::field_unit) return Label::make_unit(field.mul(a.unit, b.unit));
    const int p = field.p();
    std::array<std::uint8_t, 8> out{};
    for (int i = 0; i < p; ++i) {
        std::uint8_t row = 0;
        for (int j = 0; j < p; ++j) {
            // (A B)[i][j] = sum_k A[i][k] B[k][j]
            int bit = 0;
            for (int k = 0; k < p; ++k) bit ^= (a.rows[i] >> k & 1) & (b.rows[k] >> j & 1);
            row |= std::uint8_t(bit << j);
        }
        out[i] = row;
    }
    return Label::make_matrix(out, p);
}

std::array<std::uint8_t, 8> label_action_rows(const Field& field, const Label& h) {
    if (h.kind == LabelKind::bin_matrix) return h.rows;
    std::array<std::uint8_t, 8> rows{};
    for (int j = 0; j < field.p(); ++j) {
        Symbol img = field.mul(h.unit, Symbol(1u << j));
        for (int i = 0; i < field.p(); ++i) {
            if (img >> i & 1) rows[i] |= std::uint8_t(1u << j);
        }
    }
    return rows;
}

std::vector<Label> enumerate_label_group(const FieldSpec& spec, LabelKind kind) {
    std::vector<Label> out;
    if (kind == LabelKind::field_unit) {
        out.reserve(spec.q() - 1);
        for (int u = 1; u < spec.q(); ++u) out.push_back(Label::make_unit(Symbol(u)));
        return out;
    }
    if (spec.p > 4) throw std::invalid_argument("bin-matrix group enumeration limited to p <= 4");
    const int p = spec.p;
    const std::uint32_t cells = 1u << (p * p);
    for (std::uint32_t mask = 0; mask < cells; ++mask) {
        std::array<std::uint8_t, 8> rows{};
        for (int i = 0; i < p; ++i) rows[i] = std::uint8_t((mask >> (i * p)) & ((1u << p) - 1));
        if (row_rank(rows, p) == p) out.push_back(Label::make_matrix(rows, p));
    }
    return out;
}

std::uint64_t label_to_int(const Label& h, int p) {
    if (h.kind == LabelKind::field_unit) return h.unit;
    std::uint64_t v = 0;
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            if (h.rows[i] >> j & 1) v |= std::uint64_t(1) << (i * p + j);
        }
    }
    return v;
}

Label label_from_int(std::uint64_t v, int p, LabelKind kind) {
    if (kind == LabelKind::field_unit) {
        if (v == 0 || v >= (std::uint64_t(1) << p)) throw std::invalid_argument("field-unit label out of range");
        return Label::make_unit(Symbol(v));
    }
    std::array<std::uint8_t, 8> rows{};
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            if (v >> (i * p + j) & 1) rows[i] |= std::uint8_t(1u << j);
        }
    }
    return Label::make_matrix(rows, p);
}

LabelKind label_kind_from_string(const std::string& s) {
    if (s == "field") return LabelKind::field_unit;
    if (s == "matrix") return LabelKind::bin_matrix;
    throw std::invalid_argument("unknown label group kind: " + s);
}

std::string to_string(LabelKind kind) {
    return kind == LabelKind::field_unit ? "field" : "matrix";
}

}  // namespace nbldpc
