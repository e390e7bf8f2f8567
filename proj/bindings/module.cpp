#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "nbldpc/density_evolution.hpp"
#include "nbldpc/onthefly.hpp"
#include "nbldpc/parallel.hpp"
#include "nbldpc/version.hpp"

namespace py = pybind11;
using namespace nbldpc;

namespace {

DegreeDist make_degrees(const std::map<int, double>& lambda, const std::map<int, double>& rho) {
    return DegreeDist(lambda, rho);
}

LabelPdf make_pdf(const FieldSpec& spec, LabelKind kind, const py::object& f) {
    if (py::isinstance<py::str>(f)) {
        if (f.cast<std::string>() != "uniform") throw std::invalid_argument("f: expected 'uniform' or a dict");
        return LabelPdf::uniform(spec, kind);
    }
    std::vector<std::pair<Label, double>> support;
    for (const auto& item : f.cast<py::dict>()) {
        support.emplace_back(label_from_int(item.first.cast<std::uint64_t>(), spec.p, kind),
                             item.second.cast<double>());
    }
    return LabelPdf(std::move(support), spec);
}

FieldSpec make_spec(int p, std::uint32_t poly) { return poly ? FieldSpec(p, poly) : FieldSpec(p); }

py::list sets_to_py(const std::vector<AffineSet>& sets) {
    py::list out;
    for (const AffineSet& s : sets) {
        auto el = s.elements();
        std::sort(el.begin(), el.end());
        py::list members;
        for (Symbol v : el) members.append(int(v));
        out.append(members);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_nbldpc, m) {
    m.doc() = "non-binary LDPC codes over the binary erasure channel";
    m.attr("__version__") = NBLDPC_VERSION;

    py::class_<LdpcCode>(m, "Code")
        .def_property_readonly("n", &LdpcCode::n)
        .def_property_readonly("m", &LdpcCode::m)
        .def_property_readonly("p", [](const LdpcCode& c) { return c.field_spec().p; })
        .def_property_readonly("bit_length", &LdpcCode::bit_length)
        .def_property_readonly("edges",
                               [](const LdpcCode& c) {
                                   py::list out;
                                   for (const auto& e : c.edges())
                                       out.append(py::make_tuple(e.check, e.variable,
                                                                 label_to_int(e.label, c.field_spec().p)));
                                   return out;
                               })
        .def("k_bin", [](const LdpcCode& c) { return BinaryImage(c).k_bin(); })
        .def("verify", [](const LdpcCode& c, const std::vector<Symbol>& w) { return verify_codeword(c, w); })
        .def("__repr__", [](const LdpcCode& c) {
            std::ostringstream os;
            os << "<nbldpc.Code n=" << c.n() << " m=" << c.m() << " q=" << c.field_spec().q() << ">";
            return os.str();
        });

    m.def(
        "gf_mul",
        [](int p, Symbol a, Symbol b, std::uint32_t poly) { return Field(make_spec(p, poly)).mul(a, b); },
        py::arg("p"), py::arg("a"), py::arg("b"), py::arg("poly") = 0);

    m.def(
        "sample_code",
        [](int p, int n, const std::map<int, double>& lambda, const std::map<int, double>& rho,
           const py::object& f, std::uint64_t seed, const std::string& group, std::uint32_t poly) {
            const FieldSpec spec = make_spec(p, poly);
            const LabelKind kind = label_kind_from_string(group);
            return sample_code(spec, n, make_degrees(lambda, rho), make_pdf(spec, kind, f), seed);
        },
        py::arg("p"), py::arg("n"), py::arg("lambda"), py::arg("rho"), py::arg("f") = "uniform",
        py::arg("seed") = 1, py::arg("group") = "field", py::arg("poly") = 0);

    m.def("write_code", &write_code_file, py::arg("path"), py::arg("code"));
    m.def("read_code", &read_code_file, py::arg("path"));

    m.def(
        "encode",
        [](const LdpcCode& code, const std::vector<std::uint8_t>& message) {
            return Encoder(code).encode(message);
        },
        py::arg("code"), py::arg("message"), "Encode k_bin message bits into N symbols.");

    m.def(
        "decode_bits",
        [](const LdpcCode& code, const std::vector<int>& bits) {
            ChannelOutput chan;
            chan.p = code.field_spec().p;
            if (int(bits.size()) != code.bit_length()) throw std::invalid_argument("bits must have length N*p");
            for (int b : bits) chan.bits.push_back(b < 0 ? Bit::erased : Bit(b & 1));
            const DecodeResult res = decode(code, chan);
            py::dict out;
            out["outcome"] = res.outcome == DecodeOutcome::success    ? "success"
                             : res.outcome == DecodeOutcome::stalled ? "stalled"
                                                                     : "contradiction";
            out["iterations"] = res.iterations;
            out["sets"] = sets_to_py(res.a_posteriori);
            return out;
        },
        py::arg("code"), py::arg("bits"),
        "Batch decode from per-bit observations (0, 1, or -1 for erased), bit j of symbol n at n*p+j.");

    m.def(
        "decode_stream",
        [](const LdpcCode& code, const std::vector<std::tuple<int, int, int>>& stream) {
            ArrivalStream s;
            for (const auto& [v, pos, val] : stream) s.push_back({v, pos, val});
            const StreamResult res = decode_stream(code, s);
            py::dict out;
            out["k_received"] = res.k_received ? py::object(py::int_(*res.k_received)) : py::none();
            out["contradiction"] = res.contradiction;
            out["sets"] = sets_to_py(res.sets);
            return out;
        },
        py::arg("code"), py::arg("stream"),
        "On-the-fly decode of (symbol, bit_position, bit_value) arrivals; stops when all sets are singletons.");

    m.def(
        "equivalence_check",
        [](const LdpcCode& code, const std::vector<std::tuple<int, int, int>>& prefix) {
            ArrivalStream s;
            for (const auto& [v, pos, val] : prefix) s.push_back({v, pos, val});
            return equivalence_check(code, s);
        },
        py::arg("code"), py::arg("prefix"));

    m.def(
        "estimate_inefficiency",
        [](const LdpcCode& code, int trials, std::uint64_t seed, int jobs) {
            const InefficiencyReport rep = estimate_inefficiency(code, trials, seed, jobs);
            py::dict out;
            out["mu_mean"] = rep.mu_mean;
            out["std_error"] = rep.std_error;
            out["trials"] = rep.trials;
            out["incomplete"] = rep.incomplete;
            out["k_bin"] = rep.k_bin;
            out["mu_samples"] = rep.mu_samples;
            return out;
        },
        py::arg("code"), py::arg("trials"), py::arg("seed") = 1, py::arg("jobs") = 0);

    m.def(
        "simulate",
        [](const LdpcCode& code, const std::vector<double>& epsilons, int trials, std::uint64_t seed,
           int jobs) {
            py::list out;
            for (const auto& pt : simulate_grid(code, epsilons, trials, seed, jobs)) {
                py::dict d;
                d["epsilon"] = pt.epsilon;
                d["trials"] = pt.trials;
                d["block_failures"] = pt.block_failures;
                d["residual_bit_erasures"] = pt.residual_bit_erasures;
                out.append(d);
            }
            return out;
        },
        py::arg("code"), py::arg("epsilons"), py::arg("trials"), py::arg("seed") = 1, py::arg("jobs") = 0);

    m.def(
        "gamma_dist",
        [](int p, double epsilon, std::uint32_t poly) {
            const FieldSpec spec = make_spec(p, poly);
            DeContext ctx(spec, LabelPdf::uniform(spec, LabelKind::field_unit));
            py::list out;
            const SubspaceDist g = gamma_dist(ctx, epsilon);
            for (std::size_t i = 0; i < g.size(); ++i) {
                auto el = ctx.grassmannian()[i].elements();
                std::sort(el.begin(), el.end());
                py::list members;
                for (Symbol v : el) members.append(int(v));
                out.append(py::make_tuple(members, g[i]));
            }
            return out;
        },
        py::arg("p"), py::arg("epsilon"), py::arg("poly") = 0,
        "A-priori subspace distribution as (subspace elements, probability) pairs.");

    m.def(
        "grassmannian_size",
        [](int p) { return enumerate_grassmannian(FieldSpec(p)).size(); }, py::arg("p"));

    m.def(
        "threshold",
        [](int p, const std::map<int, double>& lambda, const std::map<int, double>& rho, const py::object& f,
           const std::string& group, std::uint32_t poly, int max_de_iters, double delta, double bisect_tol,
           bool reduced) {
            const FieldSpec spec = make_spec(p, poly);
            const LabelKind kind = label_kind_from_string(group);
            const LabelPdf pdf = make_pdf(spec, kind, f);
            const DegreeDist dd = make_degrees(lambda, rho);
            DeOptions opts;
            opts.max_de_iters = max_de_iters;
            opts.convergence_delta = delta;
            opts.bisection_tolerance = bisect_tol;
            if (reduced) return ReducedDe(spec, pdf).threshold(dd, opts);
            DeContext ctx(spec, pdf);
            return threshold(ctx, dd, opts);
        },
        py::arg("p"), py::arg("lambda"), py::arg("rho"), py::arg("f") = "uniform", py::arg("group") = "field",
        py::arg("poly") = 0, py::arg("max_de_iters") = DeOptions{}.max_de_iters,
        py::arg("delta") = DeOptions{}.convergence_delta,
        py::arg("bisect_tol") = DeOptions{}.bisection_tolerance, py::arg("reduced") = false,
        "Density evolution threshold of the ensemble (GF(2^p), group, lambda, rho, f).");

    m.def(
        "evolve",
        [](int p, const std::map<int, double>& lambda, const std::map<int, double>& rho, const py::object& f,
           double epsilon, const std::string& group, std::uint32_t poly, int max_de_iters, double delta) {
            const FieldSpec spec = make_spec(p, poly);
            const LabelKind kind = label_kind_from_string(group);
            DeContext ctx(spec, make_pdf(spec, kind, f));
            DeOptions opts;
            opts.max_de_iters = max_de_iters;
            opts.convergence_delta = delta;
            const EvolveResult res = evolve(ctx, make_degrees(lambda, rho), epsilon, opts);
            py::dict out;
            out["converged"] = res.converged;
            out["iterations"] = res.iterations;
            out["p_zero"] = res.final_p[ctx.grassmannian().zero_index()];
            return out;
        },
        py::arg("p"), py::arg("lambda"), py::arg("rho"), py::arg("f"), py::arg("epsilon"),
        py::arg("group") = "field", py::arg("poly") = 0,
        py::arg("max_de_iters") = DeOptions{}.max_de_iters, py::arg("delta") = DeOptions{}.convergence_delta);

    m.def(
        "threshold_surface",
        [](int p, const std::map<int, double>& lambda, const std::map<int, double>& rho, int resolution,
           const std::string& group, std::uint32_t poly, int max_de_iters, int jobs) {
            const FieldSpec spec = make_spec(p, poly);
            const LabelKind kind = label_kind_from_string(group);
            DeOptions opts;
            opts.max_de_iters = max_de_iters;
            py::list out;
            for (const auto& pt : threshold_surface(spec, make_degrees(lambda, rho),
                                                    enumerate_label_group(spec, kind), resolution, opts, jobs)) {
                out.append(py::make_tuple(pt.f, pt.threshold));
            }
            return out;
        },
        py::arg("p"), py::arg("lambda"), py::arg("rho"), py::arg("resolution") = 25, py::arg("group") = "field",
        py::arg("poly") = 0, py::arg("max_de_iters") = DeOptions{}.max_de_iters, py::arg("jobs") = 0);
}
