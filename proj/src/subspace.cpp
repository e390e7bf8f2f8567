#include "nbldpc/subspace.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace nbldpc {

namespace {

int top_bit(std::uint32_t v) { return 31 - std::countl_zero(v); }

}  // namespace

Subspace Subspace::span(int p, const std::vector<Symbol>& gens) {
    Subspace s(p);
    for (Symbol g : gens) s.insert(g);
    return s;
}

Subspace Subspace::full(int p) {
    Subspace s(p);
    for (int i = 0; i < p; ++i) s.insert(Symbol(1u << i));
    return s;
}

Symbol Subspace::reduce(Symbol v) const {
    for (int i = 0; i < dim_; ++i) {
        if (v >> top_bit(rows_[i]) & 1) v ^= rows_[i];
    }
    return v;
}

bool Subspace::insert(Symbol v) {
    v = reduce(v);
    if (v == 0) return false;
    const int piv = top_bit(v);
    // back-eliminate the new pivot from existing rows
    for (int i = 0; i < dim_; ++i) {
        if (rows_[i] >> piv & 1) rows_[i] ^= v;
    }
    int pos = dim_;
    while (pos > 0 && top_bit(rows_[pos - 1]) < piv) {
        rows_[pos] = rows_[pos - 1];
        --pos;
    }
    rows_[pos] = v;
    ++dim_;
    return true;
}

std::vector<Symbol> Subspace::elements() const {
    std::vector<Symbol> out{0};
    out.reserve(cardinality());
    for (int i = 0; i < dim_; ++i) {
        const std::size_t n = out.size();
        for (std::size_t k = 0; k < n; ++k) out.push_back(Symbol(out[k] ^ rows_[i]));
    }
    return out;
}

std::uint64_t Subspace::key() const {
    std::uint64_t k = 0;
    for (int i = 0; i < dim_; ++i) k = (k << 8) | rows_[i];
    return k;
}

Subspace sum(const Subspace& a, const Subspace& b) {
    Subspace out = a;
    for (int i = 0; i < b.dim(); ++i) out.insert(b.row(i));
    return out;
}

namespace {

// Row echelon over GF(2) for short wide rows; used by the Zassenhaus-style
// intersection below. Rows are kept with strictly decreasing top bits.
struct Echelon {
    std::vector<std::uint32_t> rows;

    std::uint32_t reduce(std::uint32_t v) const {
        for (std::uint32_t r : rows) {
            if (v >> top_bit(r) & 1) v ^= r;
        }
        return v;
    }
    void insert(std::uint32_t v) {
        v = reduce(v);
        if (v == 0) return;
        for (std::uint32_t& r : rows) {
            if (r >> top_bit(v) & 1) r ^= v;
        }
        rows.push_back(v);
        std::sort(rows.begin(), rows.end(), std::greater<>());
    }
};

}  // namespace

Subspace intersect(const Subspace& a, const Subspace& b) {
    const int p = a.p();
    // Zassenhaus: echelonize rows [u | u] and [w | 0]; rows whose left half
    // vanished span the intersection in the right half.
    Echelon ech;
    for (int i = 0; i < a.dim(); ++i) {
        std::uint32_t u = a.row(i);
        ech.insert(u << p | u);
    }
    for (int i = 0; i < b.dim(); ++i) ech.insert(std::uint32_t(b.row(i)) << p);
    Subspace out(p);
    const std::uint32_t right = (1u << p) - 1;
    for (std::uint32_t r : ech.rows) {
        if ((r >> p) == 0) out.insert(Symbol(r & right));
    }
    return out;
}

Subspace act(const Field& field, const Label& h, const Subspace& v) {
    Subspace out(v.p());
    for (int i = 0; i < v.dim(); ++i) out.insert(apply_label(field, h, v.row(i)));
    return out;
}

AffineSet::AffineSet(Symbol offset, Subspace direction)
    : offset_(direction.reduce(offset)), dir_(std::move(direction)), empty_(false) {}

AffineSet AffineSet::empty(int p) { return AffineSet(p, true); }

std::vector<Symbol> AffineSet::elements() const {
    if (empty_) return {};
    std::vector<Symbol> out = dir_.elements();
    for (Symbol& s : out) s = Symbol(s ^ offset_);
    return out;
}

AffineSet sum(const AffineSet& a, const AffineSet& b) {
    if (a.is_empty() || b.is_empty()) return AffineSet::empty(a.p());
    return AffineSet(Symbol(a.offset() ^ b.offset()), sum(a.direction(), b.direction()));
}

AffineSet intersect(const AffineSet& a, const AffineSet& b) {
    if (a.is_empty() || b.is_empty()) return AffineSet::empty(a.p());
    // Solve u + w = offset_a + offset_b with u in dir_a, w in dir_b, tracking
    // which side contributed; no solution means disjoint cosets.
    struct Row {
        Symbol v, u_part;
    };
    std::vector<Row> ech;
    auto insert = [&ech](Symbol v, Symbol u_part) {
        for (const Row& r : ech) {
            if (v >> top_bit(r.v) & 1) {
                v ^= r.v;
                u_part ^= r.u_part;
            }
        }
        if (v == 0) return;
        ech.push_back({v, u_part});
        std::sort(ech.begin(), ech.end(), [](const Row& x, const Row& y) { return x.v > y.v; });
    };
    for (int i = 0; i < a.direction().dim(); ++i) insert(a.direction().row(i), a.direction().row(i));
    for (int i = 0; i < b.direction().dim(); ++i) insert(b.direction().row(i), 0);
    Symbol c = Symbol(a.offset() ^ b.offset());
    Symbol u0 = 0;
    for (const Row& r : ech) {
        if (c >> top_bit(r.v) & 1) {
            c ^= r.v;
            u0 ^= r.u_part;
        }
    }
    if (c != 0) return AffineSet::empty(a.p());
    return AffineSet(Symbol(a.offset() ^ u0), intersect(a.direction(), b.direction()));
}

AffineSet act(const Field& field, const Label& h, const AffineSet& a) {
    if (a.is_empty()) return a;
    return AffineSet(apply_label(field, h, a.offset()), act(field, h, a.direction()));
}

AffineSet restrict_bit(const AffineSet& a, int pos, int value) {
    if (a.is_empty()) return a;
    const Subspace& dir = a.direction();
    Symbol star = 0;
    for (int i = 0; i < dir.dim(); ++i) {
        if (dir.row(i) >> pos & 1) { star = dir.row(i); break; }
    }
    if (star == 0) {
        // bit is constant on the set
        if ((a.offset() >> pos & 1) == value) return a;
        return AffineSet::empty(a.p());
    }
    Subspace nd(a.p());
    for (int i = 0; i < dir.dim(); ++i) {
        Symbol r = dir.row(i);
        if (r == star) continue;
        if (r >> pos & 1) r ^= star;
        nd.insert(r);
    }
    Symbol off = a.offset();
    if ((off >> pos & 1) != value) off ^= star;
    return AffineSet(off, nd);
}

Grassmannian::Grassmannian(FieldSpec spec) : spec_(spec) {
    if (spec_.p > 4) throw std::invalid_argument("Grassmannian enumeration limited to p <= 4");
    std::unordered_map<std::uint64_t, std::size_t> seen;
    std::vector<Subspace> frontier{Subspace(spec_.p)};
    seen[frontier[0].key()] = 0;
    spaces_.push_back(frontier[0]);
    while (!frontier.empty()) {
        std::vector<Subspace> next;
        for (const Subspace& s : frontier) {
            for (int v = 1; v < spec_.q(); ++v) {
                if (s.contains(Symbol(v))) continue;
                Subspace grown = s;
                grown.insert(Symbol(v));
                if (seen.emplace(grown.key(), 0).second) {
                    spaces_.push_back(grown);
                    next.push_back(grown);
                }
            }
        }
        frontier = std::move(next);
    }
    std::sort(spaces_.begin(), spaces_.end(), [](const Subspace& x, const Subspace& y) {
        return x.dim() != y.dim() ? x.dim() < y.dim() : x.key() < y.key();
    });
    for (std::size_t i = 0; i < spaces_.size(); ++i) index_[spaces_[i].key()] = i;
}

std::size_t Grassmannian::index_of(const Subspace& v) const {
    auto it = index_.find(v.key());
    if (it == index_.end()) throw std::logic_error("subspace not in Grassmannian index");
    return it->second;
}

Grassmannian enumerate_grassmannian(const FieldSpec& spec) { return Grassmannian(spec); }

ConjugationClasses conjugation_classes(const Field& field, const Grassmannian& gr,
                                       const std::vector<Label>& labels) {
    ConjugationClasses out;
    out.class_of.assign(gr.size(), SIZE_MAX);
    for (std::size_t i = 0; i < gr.size(); ++i) {
        if (out.class_of[i] != SIZE_MAX) continue;
        const std::size_t cid = out.members.size();
        std::vector<std::size_t> orbit{i};
        out.class_of[i] = cid;
        for (std::size_t k = 0; k < orbit.size(); ++k) {
            for (const Label& h : labels) {
                std::size_t j = gr.index_of(act(field, h, gr[orbit[k]]));
                if (out.class_of[j] == SIZE_MAX) {
                    out.class_of[j] = cid;
                    orbit.push_back(j);
                }
            }
        }
        std::sort(orbit.begin(), orbit.end());
        out.members.push_back(std::move(orbit));
    }
    return out;
}

}  // namespace nbldpc
