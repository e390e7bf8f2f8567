#include "nbldpc/code.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace nbldpc {

LdpcCode::LdpcCode(FieldSpec spec, LabelKind kind, int n, int m, std::vector<Edge> edges)
    : spec_(spec), kind_(kind), field_(spec), n_(n), m_(m), edges_(std::move(edges)) {
    if (n_ <= 0 || m_ <= 0) throw std::invalid_argument("code must have at least one variable and one check");
    var_edges_.resize(n_);
    chk_edges_.resize(m_);
    std::set<std::pair<int, int>> seen;
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const Edge& ed = edges_[e];
        if (ed.check < 0 || ed.check >= m_ || ed.variable < 0 || ed.variable >= n_)
            throw std::invalid_argument("edge endpoint out of range");
        if (ed.label.kind != kind_) throw std::invalid_argument("edge label kind mismatch");
        if (!seen.emplace(ed.check, ed.variable).second)
            throw std::invalid_argument("parallel edge between check and variable");
        var_edges_[ed.variable].push_back(int(e));
        chk_edges_[ed.check].push_back(int(e));
    }
}

namespace {

double next_double(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

// Node counts per degree from an edge-perspective distribution: count_d
// proportional to coeff_d / d, rounded by largest remainder to the exact
// total.
std::vector<std::pair<int, int>> node_counts(const std::map<int, double>& coeffs, double total_nodes,
                                             const char* side) {
    double denom = 0.0;
    for (const auto& [d, c] : coeffs) denom += c / d;
    std::vector<std::pair<int, int>> counts;    // (degree, count)
    std::vector<std::pair<double, int>> remainder;  // (frac, index)
    const int total = int(std::llround(total_nodes));
    int assigned = 0;
    for (const auto& [d, c] : coeffs) {
        const double exact = total * (c / d) / denom;
        const int lo = int(std::floor(exact + 1e-9));
        counts.emplace_back(d, lo);
        remainder.emplace_back(exact - lo, int(counts.size()) - 1);
        assigned += lo;
    }
    std::sort(remainder.begin(), remainder.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    for (int i = 0; assigned < total; ++i, ++assigned) {
        if (i >= int(remainder.size())) throw std::invalid_argument(std::string(side) + ": degree profile infeasible");
        counts[remainder[i].second].second++;
    }
    return counts;
}

}  // namespace

LdpcCode sample_code(const FieldSpec& spec, int n, const DegreeDist& degrees, const LabelPdf& pdf,
                     std::uint64_t seed) {
    if (n <= 0) throw std::invalid_argument("sample_code: N must be positive");
    // variable side must realize the requested profile exactly
    auto var_counts = node_counts(degrees.lambda(), n, "lambda");
    long edge_count = 0;
    {
        int total = 0;
        double denom = degrees.lambda_integral();
        for (auto& [d, cnt] : var_counts) {
            const double exact = n * (degrees.lambda().at(d) / d) / denom;
            if (std::abs(exact - cnt) > 1e-6)
                throw std::invalid_argument("sample_code: lambda profile does not yield integer node counts at this N");
            total += cnt;
            edge_count += long(d) * cnt;
        }
        if (total != n) throw std::invalid_argument("sample_code: lambda profile does not fill N nodes");
    }

    const double m_exact = edge_count * degrees.rho_integral();
    const int m = std::max(1, int(std::llround(m_exact)));
    auto chk_counts = node_counts(degrees.rho(), m, "rho");
    long chk_sockets = 0;
    for (auto& [d, cnt] : chk_counts) chk_sockets += long(d) * cnt;
    // The socket totals must agree; absorb any remainder in one check.
    long diff = edge_count - chk_sockets;

    std::vector<int> var_degrees, chk_degrees;
    for (auto& [d, cnt] : var_counts) var_degrees.insert(var_degrees.end(), cnt, d);
    for (auto& [d, cnt] : chk_counts) chk_degrees.insert(chk_degrees.end(), cnt, d);
    if (!chk_degrees.empty()) {
        chk_degrees.back() += int(diff);
        if (chk_degrees.back() < 1)
            throw std::invalid_argument("sample_code: rho profile infeasible at this edge count");
    }

    std::mt19937_64 rng(seed);
    std::vector<int> var_sock, chk_sock;
    for (int v = 0; v < n; ++v) var_sock.insert(var_sock.end(), var_degrees[v], v);
    for (int c = 0; c < m; ++c) chk_sock.insert(chk_sock.end(), chk_degrees[c], c);
    if (var_sock.size() != chk_sock.size()) throw std::logic_error("socket bookkeeping mismatch");
    const std::size_t ecount = var_sock.size();

    for (int restart = 0; restart < 100; ++restart) {
        // Fisher-Yates on the check sockets
        for (std::size_t i = ecount - 1; i > 0; --i) {
            const std::size_t j = std::size_t(next_double(rng) * double(i + 1));
            std::swap(chk_sock[i], chk_sock[j]);
        }
        // resolve parallel edges by local re-pairing passes
        bool simple = false;
        for (int pass = 0; pass < 200 && !simple; ++pass) {
            std::set<std::pair<int, int>> seen;
            std::vector<std::size_t> dups;
            for (std::size_t e = 0; e < ecount; ++e) {
                if (!seen.emplace(chk_sock[e], var_sock[e]).second) dups.push_back(e);
            }
            if (dups.empty()) {
                simple = true;
                break;
            }
            for (std::size_t e : dups) {
                const std::size_t j = std::size_t(next_double(rng) * double(ecount));
                std::swap(chk_sock[e], chk_sock[j]);
            }
        }
        if (!simple) continue;
        std::vector<LdpcCode::Edge> edges;
        edges.reserve(ecount);
        const auto& support = pdf.support();
        for (std::size_t e = 0; e < ecount; ++e) {
            double u = next_double(rng);
            std::size_t k = 0;
            for (; k + 1 < support.size(); ++k) {
                u -= support[k].second;
                if (u < 0) break;
            }
            edges.push_back({chk_sock[e], var_sock[e], support[k].first});
        }
        return LdpcCode(spec, pdf.kind(), n, m, std::move(edges));
    }
    throw std::runtime_error("sample_code: could not produce a simple graph (degree profile too dense?)");
}

BinaryImage::BinaryImage(const LdpcCode& code) {
    const int p = code.field_spec().p;
    rows_ = code.m() * p;
    cols_ = code.n() * p;
    stride_ = std::size_t(cols_ + 63) / 64;
    words_.assign(std::size_t(rows_) * stride_, 0);
    const Field& field = code.field();
    for (const auto& e : code.edges()) {
        const auto rows = label_action_rows(field, e.label);
        for (int i = 0; i < p; ++i) {
            for (int j = 0; j < p; ++j) {
                if (rows[i] >> j & 1) {
                    const int r = e.check * p + i;
                    const int c = e.variable * p + j;
                    words_[std::size_t(r) * stride_ + c / 64] |= std::uint64_t(1) << (c % 64);
                }
            }
        }
    }
    // reduced row echelon form
    rref_ = words_;
    int row = 0;
    for (int col = 0; col < cols_ && row < rows_; ++col) {
        int piv = -1;
        for (int r = row; r < rows_; ++r) {
            if (rref_[std::size_t(r) * stride_ + col / 64] >> (col % 64) & 1) { piv = r; break; }
        }
        if (piv < 0) continue;
        for (std::size_t w = 0; w < stride_; ++w)
            std::swap(rref_[std::size_t(row) * stride_ + w], rref_[std::size_t(piv) * stride_ + w]);
        for (int r = 0; r < rows_; ++r) {
            if (r != row && (rref_[std::size_t(r) * stride_ + col / 64] >> (col % 64) & 1)) {
                for (std::size_t w = 0; w < stride_; ++w)
                    rref_[std::size_t(r) * stride_ + w] ^= rref_[std::size_t(row) * stride_ + w];
            }
        }
        pivot_cols_.push_back(col);
        ++row;
    }
    rank_ = row;
}

Encoder::Encoder(const LdpcCode& code) : code_(code), image_(code) {
    std::vector<bool> is_pivot(image_.cols(), false);
    for (int c : image_.pivot_cols_) is_pivot[c] = true;
    for (int c = 0; c < image_.cols(); ++c) {
        if (!is_pivot[c]) free_cols_.push_back(c);
    }
}

std::vector<Symbol> Encoder::encode(const std::vector<std::uint8_t>& message) const {
    if (int(message.size()) != k_bin())
        throw std::invalid_argument("encode: message length must equal K_bin");
    std::vector<std::uint8_t> x(image_.cols(), 0);
    for (std::size_t i = 0; i < free_cols_.size(); ++i) x[free_cols_[i]] = message[i] & 1;
    // pivots solve to the XOR of the free bits on their reduced row
    for (int r = 0; r < image_.rank(); ++r) {
        int acc = 0;
        for (std::size_t i = 0; i < free_cols_.size(); ++i) {
            const int c = free_cols_[i];
            acc ^= int(image_.rref_[std::size_t(r) * image_.stride_ + c / 64] >> (c % 64) & 1) & x[c];
        }
        x[image_.pivot_cols_[r]] = std::uint8_t(acc);
    }
    const int p = code_.field_spec().p;
    std::vector<Symbol> word(code_.n(), 0);
    for (int n = 0; n < code_.n(); ++n) {
        for (int j = 0; j < p; ++j) word[n] |= Symbol(x[n * p + j] << j);
    }
    return word;
}

bool verify_codeword(const LdpcCode& code, const std::vector<Symbol>& word) {
    if (int(word.size()) != code.n()) throw std::invalid_argument("verify_codeword: word length mismatch");
    for (int m = 0; m < code.m(); ++m) {
        Symbol acc = 0;
        for (int e : code.check_edges(m)) {
            const auto& ed = code.edges()[e];
            acc ^= apply_label(code.field(), ed.label, word[ed.variable]);
        }
        if (acc != 0) return false;
    }
    return true;
}

void write_code(std::ostream& os, const LdpcCode& code) {
    os << code.n() << ' ' << code.m() << ' ' << code.field_spec().q() << ' ' << to_string(code.kind());
    if (code.field_spec().poly != FieldSpec::default_poly(code.field_spec().p))
        os << ' ' << code.field_spec().poly;
    os << '\n';
    const int p = code.field_spec().p;
    for (int m = 0; m < code.m(); ++m) {
        os << code.check_edges(m).size();
        for (int e : code.check_edges(m)) {
            const auto& ed = code.edges()[e];
            os << ' ' << (ed.variable + 1) << ' ' << label_to_int(ed.label, p);
        }
        os << '\n';
    }
}

LdpcCode read_code(std::istream& is) {
    std::string header;
    if (!std::getline(is, header)) throw std::runtime_error("code file: missing header");
    std::istringstream hs(header);
    int n, m, q;
    std::string group;
    if (!(hs >> n >> m >> q >> group)) throw std::runtime_error("code file: malformed header");
    int p = 0;
    while ((1 << p) < q) ++p;
    if ((1 << p) != q || p < 1 || p > 8) throw std::runtime_error("code file: q must be a power of 2 in 2..256");
    std::uint32_t poly = 0;
    if (hs >> poly) {
        // explicit reduction polynomial
    } else {
        poly = FieldSpec::default_poly(p);
    }
    FieldSpec spec(p, poly);
    const LabelKind kind = label_kind_from_string(group);
    std::vector<LdpcCode::Edge> edges;
    for (int mm = 0; mm < m; ++mm) {
        int deg;
        if (!(is >> deg) || deg < 0) throw std::runtime_error("code file: bad check degree");
        for (int k = 0; k < deg; ++k) {
            long long v;
            unsigned long long l;
            if (!(is >> v >> l)) throw std::runtime_error("code file: truncated adjacency list");
            if (v < 1 || v > n) throw std::runtime_error("code file: variable index out of range");
            edges.push_back({mm, int(v - 1), label_from_int(l, p, kind)});
        }
    }
    return LdpcCode(spec, kind, n, m, std::move(edges));
}

void write_code_file(const std::string& path, const LdpcCode& code) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    write_code(os, code);
}

LdpcCode read_code_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open code file: " + path);
    return read_code(is);
}

namespace {

std::map<int, double> parse_poly_coeffs(const nlohmann::json& j, const char* name) {
    std::map<int, double> out;
    if (!j.is_object()) throw std::invalid_argument(std::string(name) + ": expected an object of degree -> coeff");
    for (const auto& [key, val] : j.items()) out[std::stoi(key)] = val.get<double>();
    return out;
}

}  // namespace

EnsembleConfig parse_ensemble_config(const std::string& json_text) {
    const nlohmann::json j = nlohmann::json::parse(json_text);
    EnsembleConfig cfg;
    const int p = j.at("p").get<int>();
    const std::uint32_t poly = j.contains("poly") ? j["poly"].get<std::uint32_t>() : FieldSpec::default_poly(p);
    cfg.spec = FieldSpec(p, poly);
    cfg.kind = label_kind_from_string(j.value("group", "field"));
    cfg.degrees.emplace(parse_poly_coeffs(j.at("lambda"), "lambda"), parse_poly_coeffs(j.at("rho"), "rho"));
    if (j.contains("f")) {
        const auto& f = j["f"];
        if (f.is_string() && f.get<std::string>() == "uniform") {
            cfg.pdf.emplace(LabelPdf::uniform(cfg.spec, cfg.kind));
        } else if (f.is_object()) {
            std::vector<std::pair<Label, double>> support;
            for (const auto& [key, val] : f.items()) {
                support.emplace_back(label_from_int(std::stoull(key), p, cfg.kind), val.get<double>());
            }
            cfg.pdf.emplace(std::move(support), cfg.spec);
        } else {
            throw std::invalid_argument("f: expected \"uniform\" or an object of label -> probability");
        }
    }
    cfg.seed = j.value("seed", std::uint64_t(0));
    cfg.n = j.value("n", 0);
    return cfg;
}

}  // namespace nbldpc
