#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "nbldpc/density_evolution.hpp"
#include "nbldpc/onthefly.hpp"
#include "nbldpc/parallel.hpp"
#include "nbldpc/version.hpp"

using nlohmann::json;
using namespace nbldpc;

namespace {

// ---- flag parsing helpers -------------------------------------------------

// "coeff@degree" comma-separated, edge perspective; tolerates an optional
// "<index>:" prefix on each entry.
std::map<int, double> parse_degree_flag(const std::string& text, const char* name) {
    std::map<int, double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto colon = item.find(':');
        std::string body = colon == std::string::npos ? item : item.substr(colon + 1);
        const auto at = body.find('@');
        if (at == std::string::npos)
            throw std::invalid_argument(std::string(name) + ": expected coeff@degree entries");
        out[std::stoi(body.substr(at + 1))] += std::stod(body.substr(0, at));
    }
    if (out.empty()) throw std::invalid_argument(std::string(name) + ": empty distribution");
    return out;
}

// "uniform" or comma-separated "label:prob" with labels as integers.
LabelPdf parse_pdf_flag(const std::string& text, const FieldSpec& spec, LabelKind kind) {
    if (text == "uniform") return LabelPdf::uniform(spec, kind);
    std::vector<std::pair<Label, double>> support;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("f: expected label:prob entries");
        support.emplace_back(label_from_int(std::stoull(item.substr(0, colon)), spec.p, kind),
                             std::stod(item.substr(colon + 1)));
    }
    return LabelPdf(std::move(support), spec);
}

// "lo:hi:count" or a comma-separated list
std::vector<double> parse_grid_flag(const std::string& text) {
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        std::stringstream ss(text);
        std::string lo_s, hi_s, n_s;
        std::getline(ss, lo_s, ':');
        std::getline(ss, hi_s, ':');
        std::getline(ss, n_s, ':');
        const double lo = std::stod(lo_s), hi = std::stod(hi_s);
        const int count = std::stoi(n_s);
        if (count < 2) throw std::invalid_argument("eps grid needs at least 2 points");
        for (int i = 0; i < count; ++i) out.push_back(lo + (hi - lo) * i / (count - 1));
        return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    if (out.empty()) throw std::invalid_argument("empty eps grid");
    return out;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string config_hash(const json& cfg) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)fnv1a(cfg.dump()));
    return buf;
}

void attach_provenance(json& out, const json& cfg) {
    out["config"] = cfg;
    out["config_hash"] = config_hash(cfg);
    out["version"] = NBLDPC_VERSION;
    out["schema_version"] = 1;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << text;
}

std::string provenance_comment(const json& cfg) {
    std::string out = "# nbldpc " NBLDPC_VERSION " schema 1\n";
    out += "# config " + config_hash(cfg) + ": " + cfg.dump() + "\n";
    return out;
}

// Ensemble flags shared by several subcommands; a JSON config file seeds the
// values and explicit flags override it.
struct EnsembleArgs {
    std::string config_path;
    int p = 2;
    std::string group = "field";
    std::uint32_t poly = 0;
    std::string lambda = "1.0@2";
    std::string rho = "1.0@3";
    std::string f = "uniform";
    std::uint64_t seed = 1;
    int n = 0;

    CLI::Option* p_opt = nullptr;
    CLI::Option* group_opt = nullptr;
    CLI::Option* poly_opt = nullptr;
    CLI::Option* lambda_opt = nullptr;
    CLI::Option* rho_opt = nullptr;
    CLI::Option* f_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* n_opt = nullptr;

    void add(CLI::App* cmd, bool with_n, bool with_f = true) {
        cmd->add_option("--config", config_path, "JSON config file; explicit flags override it");
        p_opt = cmd->add_option("--p", p, "extension degree of GF(2^p)");
        group_opt = cmd->add_option("--group", group, "label group: field or matrix");
        poly_opt = cmd->add_option("--poly", poly, "reduction polynomial bit pattern (default: smallest)");
        lambda_opt = cmd->add_option("--lambda", lambda, "edge-perspective variable degrees, coeff@degree list");
        rho_opt = cmd->add_option("--rho", rho, "edge-perspective check degrees, coeff@degree list");
        if (with_f) f_opt = cmd->add_option("--f", f, "label pdf: 'uniform' or label:prob list");
        seed_opt = cmd->add_option("--seed", seed, "rng seed");
        if (with_n) n_opt = cmd->add_option("--n", n, "number of variable nodes");
    }

    // resolved values, with the config file (when given) supplying defaults
    struct Resolved {
        FieldSpec spec{2};
        LabelKind kind = LabelKind::field_unit;
        std::optional<DegreeDist> degrees;
        std::optional<LabelPdf> pdf;
        std::uint64_t seed = 1;
        int n = 0;
        json echo;
    };

    Resolved resolve(bool need_f = true) const {
        Resolved r;
        std::optional<EnsembleConfig> file_cfg;
        if (!config_path.empty()) {
            std::ifstream is(config_path);
            if (!is) throw std::runtime_error("cannot open config file: " + config_path);
            std::stringstream buf;
            buf << is.rdbuf();
            file_cfg = parse_ensemble_config(buf.str());
        }
        const int p_r = (p_opt && p_opt->count()) || !file_cfg ? p : file_cfg->spec.p;
        std::uint32_t poly_r = (poly_opt && poly_opt->count()) ? poly
                               : file_cfg && file_cfg->spec.p == p_r ? file_cfg->spec.poly
                                                                     : 0;
        if (poly_r == 0) poly_r = FieldSpec::default_poly(p_r);
        r.spec = FieldSpec(p_r, poly_r);
        r.kind = (group_opt && group_opt->count()) || !file_cfg ? label_kind_from_string(group) : file_cfg->kind;
        if ((lambda_opt && lambda_opt->count()) || (rho_opt && rho_opt->count()) || !file_cfg ||
            !file_cfg->degrees) {
            r.degrees.emplace(parse_degree_flag(lambda, "lambda"), parse_degree_flag(rho, "rho"));
        } else {
            r.degrees = file_cfg->degrees;
        }
        if (need_f) {
            if ((f_opt && f_opt->count()) || !file_cfg || !file_cfg->pdf) {
                r.pdf = parse_pdf_flag(f, r.spec, r.kind);
            } else {
                r.pdf = file_cfg->pdf;
            }
        }
        r.seed = (seed_opt && seed_opt->count()) || !file_cfg ? seed : file_cfg->seed;
        r.n = (n_opt && n_opt->count()) || !file_cfg || file_cfg->n == 0 ? n : file_cfg->n;

        r.echo["p"] = r.spec.p;
        r.echo["poly"] = r.spec.poly;
        r.echo["group"] = to_string(r.kind);
        json lam, rh;
        for (const auto& [d, c] : r.degrees->lambda()) lam[std::to_string(d)] = c;
        for (const auto& [d, c] : r.degrees->rho()) rh[std::to_string(d)] = c;
        r.echo["lambda"] = lam;
        r.echo["rho"] = rh;
        if (r.pdf) {
            json fj;
            for (const auto& [h, prob] : r.pdf->support())
                fj[std::to_string(label_to_int(h, r.spec.p))] = prob;
            r.echo["f"] = fj;
        }
        r.echo["seed"] = r.seed;
        if (r.n > 0) r.echo["n"] = r.n;
        return r;
    }
};

DeOptions de_options_flags(CLI::App* cmd, DeOptions& opts) {
    cmd->add_option("--max-de-iters", opts.max_de_iters, "density evolution iteration budget");
    cmd->add_option("--delta", opts.convergence_delta, "convergence threshold on 1 - P({0})");
    cmd->add_option("--bisect-tol", opts.bisection_tolerance, "bisection tolerance on epsilon");
    return opts;
}

std::string format_mu_csv(const InefficiencyReport& rep) {
    std::string csv = "trial,mu\n";
    char line[64];
    for (std::size_t i = 0; i < rep.mu_samples.size(); ++i) {
        std::snprintf(line, sizeof line, "%zu,%.10g\n", i, rep.mu_samples[i]);
        csv += line;
    }
    return csv;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"non-binary LDPC codes over the binary erasure channel"};
    app.require_subcommand(1);
    int jobs = 0;
    app.add_option("--jobs", jobs, "worker threads for trial/grid parallelism (0 = all cores)");

    int exit_code = 0;
    std::string out_path;

    // ---- gen-code ----
    auto* gen = app.add_subcommand("gen-code", "sample a code from an ensemble and write its file");
    EnsembleArgs gen_args;
    gen_args.add(gen, true);
    std::string gen_out;
    gen->add_option("-o,--output", gen_out, "code file path")->required();
    gen->callback([&] {
        auto r = gen_args.resolve();
        if (r.n <= 0) throw std::invalid_argument("gen-code: --n is required and must be positive");
        LdpcCode code = sample_code(r.spec, r.n, *r.degrees, *r.pdf, r.seed);
        write_code_file(gen_out, code);
        BinaryImage image(code);
        json out;
        out["n"] = code.n();
        out["m"] = code.m();
        out["k_bin"] = image.k_bin();
        out["rate_bin"] = double(image.k_bin()) / image.cols();
        out["path"] = gen_out;
        attach_provenance(out, r.echo);
        std::cout << out.dump(2) << '\n';
    });

    // ---- encode ----
    auto* enc_cmd = app.add_subcommand("encode", "encode a message with a code file");
    std::string enc_code, enc_msg, enc_out;
    std::uint64_t enc_seed = 1;
    bool enc_random = false;
    enc_cmd->add_option("--code", enc_code, "code file")->required();
    enc_cmd->add_option("--message", enc_msg, "message file of K_bin characters 0/1");
    enc_cmd->add_flag("--random", enc_random, "encode a random message instead");
    enc_cmd->add_option("--seed", enc_seed, "rng seed for --random");
    enc_cmd->add_option("-o,--output", enc_out, "codeword file (channel bit-line format)");
    enc_cmd->callback([&] {
        LdpcCode code = read_code_file(enc_code);
        Encoder encoder(code);
        std::vector<std::uint8_t> message;
        if (enc_random) {
            std::mt19937_64 rng(enc_seed);
            message.resize(encoder.k_bin());
            for (auto& b : message) b = std::uint8_t(rng() & 1);
        } else {
            if (enc_msg.empty()) throw std::invalid_argument("encode: give --message or --random");
            std::ifstream is(enc_msg);
            if (!is) throw std::runtime_error("cannot open message file: " + enc_msg);
            char c;
            while (is >> c) {
                if (c == '0' || c == '1') message.push_back(std::uint8_t(c - '0'));
            }
        }
        const std::vector<Symbol> word = encoder.encode(message);
        ChannelOutput as_bits;
        as_bits.p = code.field_spec().p;
        for (Symbol s : word) {
            for (int j = 0; j < as_bits.p; ++j) as_bits.bits.push_back(Bit((s >> j) & 1));
        }
        std::ostringstream os;
        write_channel(os, as_bits);
        write_text(enc_out, os.str());
        std::cerr << "encoded " << message.size() << " bits into " << word.size() << " symbols\n";
    });

    // ---- decode ----
    auto* dec_cmd = app.add_subcommand("decode", "run the batch set decoder on a channel file");
    std::string dec_code, dec_chan, dec_out;
    int dec_iters = 0;
    dec_cmd->add_option("--code", dec_code, "code file")->required();
    dec_cmd->add_option("--channel", dec_chan, "channel output file (lines of 0/1/x)")->required();
    dec_cmd->add_option("--max-iters", dec_iters, "iteration cap (default N)");
    dec_cmd->add_option("-o,--output", dec_out, "per-symbol result file");
    dec_cmd->callback([&] {
        LdpcCode code = read_code_file(dec_code);
        ChannelOutput chan = read_channel_file(dec_chan, code.field_spec().p);
        DecodeResult res = decode(code, chan, dec_iters);
        if (res.outcome == DecodeOutcome::contradiction)
            throw std::runtime_error("decode: contradiction (channel file inconsistent with the code)");
        std::string lines;
        for (const AffineSet& s : res.a_posteriori) {
            lines += s.is_singleton() ? std::to_string(int(s.offset())) : "?" + std::to_string(s.cardinality());
            lines += '\n';
        }
        write_text(dec_out, lines);
        json out;
        out["outcome"] = res.outcome == DecodeOutcome::success ? "success" : "stalled";
        out["iterations"] = res.iterations;
        int unresolved = 0;
        for (const AffineSet& s : res.a_posteriori) unresolved += !s.is_singleton();
        out["unresolved_symbols"] = unresolved;
        std::cerr << out.dump(2) << '\n';
    });

    // ---- simulate ----
    auto* sim = app.add_subcommand("simulate", "Monte-Carlo block failure rate over an epsilon grid");
    std::string sim_code, sim_grid = "0:1:21", sim_out;
    int sim_trials = 100;
    std::uint64_t sim_seed = 1;
    sim->add_option("--code", sim_code, "code file")->required();
    sim->add_option("--eps-grid", sim_grid, "lo:hi:count or comma list");
    sim->add_option("--trials", sim_trials, "trials per grid point");
    sim->add_option("--seed", sim_seed, "rng seed");
    sim->add_option("-o,--output", sim_out, "CSV output path (default stdout)");
    sim->callback([&] {
        LdpcCode code = read_code_file(sim_code);
        const std::vector<double> grid = parse_grid_flag(sim_grid);
        const auto points = simulate_grid(code, grid, sim_trials, sim_seed, jobs);
        json cfg;
        cfg["code"] = sim_code;
        cfg["eps_grid"] = sim_grid;
        cfg["trials"] = sim_trials;
        cfg["seed"] = sim_seed;
        std::string csv = provenance_comment(cfg);
        csv += "epsilon,trials,block_failures,bit_erasures_residual\n";
        char line[128];
        for (const auto& pt : points) {
            std::snprintf(line, sizeof line, "%.6f,%d,%d,%ld\n", pt.epsilon, pt.trials, pt.block_failures,
                          pt.residual_bit_erasures);
            csv += line;
        }
        write_text(sim_out, csv);
    });

    // ---- threshold ----
    auto* th = app.add_subcommand("threshold", "density evolution threshold of an ensemble");
    EnsembleArgs th_args;
    th_args.add(th, false);
    DeOptions th_opts;
    de_options_flags(th, th_opts);
    bool th_reduced = false;
    th->add_flag("--reduced", th_reduced, "use the conjugation-collapsed recursion (uniform f only)");
    th->add_option("-o,--output", out_path, "JSON output path (default stdout)");
    th->callback([&] {
        auto r = th_args.resolve();
        const auto t0 = std::chrono::steady_clock::now();
        double value;
        if (th_reduced) {
            ReducedDe reduced(r.spec, *r.pdf);
            value = reduced.threshold(*r.degrees, th_opts);
        } else {
            DeContext ctx(r.spec, *r.pdf);
            value = threshold(ctx, *r.degrees, th_opts);
        }
        json out;
        out["threshold"] = value;
        out["reduced"] = th_reduced;
        out["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        r.echo["max_de_iters"] = th_opts.max_de_iters;
        r.echo["convergence_delta"] = th_opts.convergence_delta;
        r.echo["bisection_tolerance"] = th_opts.bisection_tolerance;
        attach_provenance(out, r.echo);
        write_text(out_path, out.dump(2) + "\n");
    });

    // ---- threshold-surface ----
    auto* surf = app.add_subcommand("threshold-surface", "threshold as a function of the label pdf");
    EnsembleArgs surf_args;
    surf_args.add(surf, false, false);
    DeOptions surf_opts;
    de_options_flags(surf, surf_opts);
    int surf_res = 25;
    std::string surf_points, surf_out;
    surf->add_option("--resolution", surf_res, "grid points per simplex axis (|L| = 3)");
    surf->add_option("--f-points", surf_points, "CSV file of explicit pdf rows (general |L|)");
    surf->add_option("-o,--output", surf_out, "CSV output path (default stdout)");
    surf->callback([&] {
        auto r = surf_args.resolve(false);
        const std::vector<Label> labels = enumerate_label_group(r.spec, r.kind);
        std::vector<SurfacePoint> pts;
        if (!surf_points.empty()) {
            std::ifstream is(surf_points);
            if (!is) throw std::runtime_error("cannot open f-points file: " + surf_points);
            std::vector<std::vector<double>> rows;
            std::string ln;
            while (std::getline(is, ln)) {
                if (ln.empty() || ln[0] == '#') continue;
                std::vector<double> row;
                std::stringstream ls(ln);
                std::string cell;
                while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
                rows.push_back(std::move(row));
            }
            pts = threshold_surface_points(r.spec, *r.degrees, labels, rows, surf_opts, jobs);
        } else {
            pts = threshold_surface(r.spec, *r.degrees, labels, surf_res, surf_opts, jobs);
        }
        r.echo["resolution"] = surf_res;
        r.echo["max_de_iters"] = surf_opts.max_de_iters;
        std::string csv = provenance_comment(r.echo);
        if (labels.size() == 3) {
            csv += "f1,f2,f3,threshold\n";
        } else {
            for (std::size_t k = 0; k < labels.size(); ++k) csv += "f" + std::to_string(k + 1) + ",";
            csv += "threshold\n";
        }
        char cell[32];
        for (const auto& pt : pts) {
            std::string row;
            for (double f : pt.f) {
                std::snprintf(cell, sizeof cell, "%.6f,", f);
                row += cell;
            }
            std::snprintf(cell, sizeof cell, "%.6f\n", pt.threshold);
            row += cell;
            csv += row;
        }
        write_text(surf_out, csv);
    });

    // ---- inefficiency ----
    auto* ineff = app.add_subcommand("inefficiency", "Monte-Carlo on-the-fly decoding inefficiency");
    EnsembleArgs in_args;
    in_args.add(ineff, true);
    std::string in_code, in_out, in_csv;
    int in_trials = 200, in_grid_points = 0, in_grid_trials = 200;
    ineff->add_option("--code", in_code, "code file (otherwise an ensemble code is sampled)");
    ineff->add_option("--trials", in_trials, "number of mu trials");
    ineff->add_option("--eps-grid-points", in_grid_points,
                      "also estimate the failure integral on this many epsilon points (0 = skip)");
    ineff->add_option("--grid-trials", in_grid_trials, "trials per epsilon grid point");
    ineff->add_option("-o,--output", in_out, "JSON report path (default stdout)");
    ineff->add_option("--csv", in_csv, "per-trial mu CSV path");
    ineff->callback([&] {
        auto r = in_args.resolve();
        std::optional<LdpcCode> code;
        if (!in_code.empty()) {
            code.emplace(read_code_file(in_code));
            r.echo["code"] = in_code;
        } else {
            if (r.n <= 0) throw std::invalid_argument("inefficiency: give --code or ensemble flags with --n");
            code.emplace(sample_code(r.spec, r.n, *r.degrees, *r.pdf, r.seed));
        }
        const InefficiencyReport rep = estimate_inefficiency(*code, in_trials, mix_seed(r.seed, 0x6d75), jobs);
        r.echo["trials"] = in_trials;
        json out;
        out["mu_mean"] = rep.mu_mean;
        out["mu_std_error"] = rep.std_error;
        out["mu_minus_one"] = rep.mu_mean - 1.0;
        out["trials"] = rep.trials;
        out["incomplete"] = rep.incomplete;
        out["k_bin"] = rep.k_bin;
        out["n_bits"] = code->bit_length();
        if (in_grid_points >= 2) {
            std::vector<double> grid;
            for (int i = 0; i < in_grid_points; ++i) grid.push_back(double(i) / (in_grid_points - 1));
            const auto pts = simulate_grid(*code, grid, in_grid_trials, mix_seed(r.seed, 0x67726964), jobs);
            double integral = 0.0, var = 0.0;
            for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
                const double pa = double(pts[i].block_failures) / pts[i].trials;
                const double pb = double(pts[i + 1].block_failures) / pts[i + 1].trials;
                integral += 0.5 * (pa + pb) * (grid[i + 1] - grid[i]);
            }
            for (std::size_t i = 0; i < pts.size(); ++i) {
                const double w = (i == 0 || i + 1 == pts.size() ? 0.5 : 1.0) / (in_grid_points - 1);
                const double ph = double(pts[i].block_failures) / pts[i].trials;
                var += w * w * ph * (1.0 - ph) / pts[i].trials;
            }
            out["failure_integral"] = integral;
            out["failure_integral_std_error"] = std::sqrt(var);
            out["eps_grid_points"] = in_grid_points;
            out["grid_trials"] = in_grid_trials;
            r.echo["eps_grid_points"] = in_grid_points;
            r.echo["grid_trials"] = in_grid_trials;
        }
        attach_provenance(out, r.echo);
        write_text(in_out, out.dump(2) + "\n");
        if (!in_csv.empty()) write_text(in_csv, format_mu_csv(rep));
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return exit_code;
}
