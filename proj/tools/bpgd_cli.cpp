// Command-line front end: code validation and construction, single-shot
// decoding, Monte Carlo sweeps, the repeated-decoding degeneracy experiment,
// and the exact factor-two bound check for small codes.
//
// Exit codes: 0 for completed experiments regardless of decoding outcomes;
// nonzero only for tool/contract failures or a violated exact bound.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bpgd/bp.hpp"
#include "bpgd/css.hpp"
#include "bpgd/decimation.hpp"
#include "bpgd/montecarlo.hpp"
#include "bpgd/oracle.hpp"
#include "bpgd/qbp.hpp"

using namespace bpgd;

namespace {

struct Opts {
    std::string code_path;
    std::vector<std::string> hgp_paths;
    std::string name = "hgp";
    std::string decoder = "bpgd";
    std::vector<double> p;
    int T = 10;
    int R = 0;  // 0 resolves to n
    double K = 25.0;
    double llr_max = 25.0;
    double gamma_prime = 1.0;
    double epsilon = 1e-10;
    double alpha = 0.625;
    std::string variant = "sum-product";
    std::uint64_t seed = 0;
    int workers = 1;
    std::uint64_t max_trials = 10000;
    std::uint64_t target_errors = 100;
    std::string out;
    std::string format = "csv";
    std::string syndrome_path;
    std::string error_path;
    std::uint64_t runs = 10000;
    std::uint64_t top = 10;
};

CssCode load_code(const Opts& o) {
    if (!o.code_path.empty()) return load_code_file(o.code_path);
    if (o.hgp_paths.size() == 2)
        return hypergraph_product(load_alist(o.hgp_paths[0]), load_alist(o.hgp_paths[1]), o.name);
    throw std::runtime_error("no code given: pass --code FILE or --hgp A.alist B.alist");
}

DecoderSpec decoder_spec(const Opts& o) {
    DecoderSpec s;
    s.kind = decoder_from_string(o.decoder);
    s.gd.T = o.T;
    s.gd.R = o.R;
    s.gd.llr_max = o.llr_max;
    s.gd.gamma_prime = o.gamma_prime;
    s.gd.seed = o.seed;
    s.gd.bp.T = o.T;
    s.gd.bp.K = o.K;
    s.gd.bp.alpha = o.alpha;
    s.gd.bp.variant = o.variant == "min-sum" ? BpVariant::MinSum : BpVariant::SumProduct;
    s.qgd.T = o.T;
    s.qgd.R = o.R;
    s.qgd.epsilon = o.epsilon;
    return s;
}

double noise_probability(const Opts& o) { return o.p.empty() ? 0.05 : o.p.front(); }

void write_output(const Opts& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out);
    if (!f) throw std::runtime_error("cannot open output file: " + o.out);
    f << text;
}

std::string read_token(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open input file: " + path);
    std::string token;
    if (!(f >> token)) throw std::runtime_error("empty input file: " + path);
    return token;
}

std::vector<std::uint8_t> symbols_from_letters(const std::string& text) {
    std::vector<std::uint8_t> symbols(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        switch (text[i]) {
            case 'I': symbols[i] = kPauliI; break;
            case 'X': symbols[i] = kPauliX; break;
            case 'Y': symbols[i] = kPauliY; break;
            case 'Z': symbols[i] = kPauliZ; break;
            default:
                throw std::runtime_error("bad Pauli letter '" + std::string(1, text[i]) +
                                         "' at position " + std::to_string(i + 1));
        }
    }
    return symbols;
}

std::string letters_from_symbols(std::span<const std::uint8_t> symbols) {
    std::string text(symbols.size(), 'I');
    for (std::size_t i = 0; i < symbols.size(); ++i) text[i] = "IXYZ"[symbols[i]];
    return text;
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

std::string weight_histogram(const BitMatrix& M) {
    if (M.rows() == 0) return "(none)";
    std::map<std::size_t, std::size_t> hist;
    for (std::size_t r = 0; r < M.rows(); ++r) ++hist[M.row_weight(r)];
    std::ostringstream out;
    bool first = true;
    for (auto [w, c] : hist) {
        if (!first) out << ' ';
        out << w << ':' << c;
        first = false;
    }
    return out.str();
}

int cmd_validate(const Opts& o) {
    std::optional<CssCode> code;
    try {
        code.emplace(load_code(o));
    } catch (const std::exception& e) {
        std::cerr << "invalid: " << e.what() << '\n';
        return 1;
    }
    std::ostringstream out;
    out << "code: " << code->name() << '\n';
    out << "n=" << code->n() << " k1=" << code->k1() << " k2=" << code->k2()
        << " m=" << code->m() << " k=" << code->k() << " valid\n";
    out << "H1 rows=" << code->H1().rows() << " row weights: " << weight_histogram(code->H1())
        << '\n';
    out << "G2 rows=" << code->G2().rows() << " row weights: " << weight_histogram(code->G2())
        << '\n';
    write_output(o, out.str());
    return 0;
}

int cmd_construct_hgp(const Opts& o) {
    if (o.hgp_paths.size() != 2)
        throw std::runtime_error("construct-hgp needs --hgp A.alist B.alist");
    if (o.out.empty()) throw std::runtime_error("construct-hgp needs --out FILE");
    CssCode code =
        hypergraph_product(load_alist(o.hgp_paths[0]), load_alist(o.hgp_paths[1]), o.name);
    save_code_file(code, o.out);
    std::cout << "code: " << code.name() << '\n'
              << "n=" << code.n() << " k1=" << code.k1() << " k2=" << code.k2()
              << " m=" << code.m() << " k=" << code.k() << " valid\n"
              << "written: " << o.out << '\n';
    return 0;
}

nlohmann::json support_json(const BitVector& v) {
    auto arr = nlohmann::json::array();
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v.get(i)) arr.push_back(i + 1);
    return arr;
}

nlohmann::json support_json(std::span<const std::uint8_t> symbols) {
    auto arr = nlohmann::json::array();
    for (std::size_t i = 0; i < symbols.size(); ++i)
        if (symbols[i] != kPauliI)
            arr.push_back({i + 1, std::string(1, "IXYZ"[symbols[i]])});
    return arr;
}

int cmd_decode(const Opts& o) {
    CssCode code = load_code(o);
    DecoderSpec spec = decoder_spec(o);
    const bool quat = decoder_is_quaternary(spec.kind);
    const double p = noise_probability(o);

    BitVector syndrome;
    std::optional<BitVector> truth_bits;
    std::optional<PauliVector> truth_pauli;
    if (!o.error_path.empty()) {
        std::string token = read_token(o.error_path);
        if (quat) {
            auto symbols = symbols_from_letters(token);
            if (symbols.size() != code.n())
                throw std::runtime_error("error length " + std::to_string(symbols.size()) +
                                         ", expected n=" + std::to_string(code.n()));
            truth_pauli = pauli_from_symbols(symbols);
            syndrome = syndrome_full(code, *truth_pauli);
        } else {
            truth_bits = BitVector::from_string(token);
            if (truth_bits->size() != code.n())
                throw std::runtime_error("error length " + std::to_string(truth_bits->size()) +
                                         ", expected n=" + std::to_string(code.n()));
            syndrome = syndrome_x(code, *truth_bits);
        }
    } else if (!o.syndrome_path.empty()) {
        syndrome = BitVector::from_string(read_token(o.syndrome_path));
        std::size_t expected = quat ? code.H1().rows() + code.G2().rows() : code.H1().rows();
        if (syndrome.size() != expected)
            throw std::runtime_error("syndrome length " + std::to_string(syndrome.size()) +
                                     ", expected " + std::to_string(expected));
    } else {
        throw std::runtime_error("decode needs --syndrome FILE or --error FILE");
    }

    nlohmann::json j;
    j["code"] = code.name();
    j["decoder"] = o.decoder;
    j["p"] = p;
    j["syndrome"] = syndrome.to_string();

    if (spec.kind == DecoderKind::Bp) {
        TannerGraph graph(code.H1());
        std::vector<double> priors(code.n(), channel_llr(p));
        BpRunResult r = bp_run(graph, syndrome, priors, spec.gd.bp);
        j["converged"] = r.converged;
        j["iterations"] = r.iterations_used;
        if (r.converged) {
            j["estimate"] = r.hard.to_string();
            j["estimate_support"] = support_json(r.hard);
        }
        if (truth_bits)
            j["outcome"] = to_string(classify_x_outcome(
                code, *truth_bits, r.converged ? std::optional<BitVector>(r.hard) : std::nullopt));
    } else if (spec.kind == DecoderKind::Bpgd || spec.kind == DecoderKind::BpgdRd) {
        TannerGraph graph(code.H1());
        std::vector<double> priors(code.n(), channel_llr(p));
        GdResult r = spec.kind == DecoderKind::Bpgd
                         ? bpgd_decode(graph, syndrome, priors, spec.gd)
                         : bpgd_rd_decode(graph, syndrome, priors, spec.gd);
        j["converged"] = r.converged;
        j["rounds"] = r.rounds_used;
        auto trace = nlohmann::json::array();
        for (auto [v, bit] : r.trace) trace.push_back({v + 1, bit});
        j["trace"] = trace;
        if (r.converged) {
            j["estimate"] = r.estimate.to_string();
            j["estimate_support"] = support_json(r.estimate);
        }
        if (truth_bits)
            j["outcome"] = to_string(classify_x_outcome(
                code, *truth_bits,
                r.converged ? std::optional<BitVector>(r.estimate) : std::nullopt));
    } else if (spec.kind == DecoderKind::Qbp) {
        QuatGraph graph(code);
        QbpConfig cfg;
        cfg.T = spec.qgd.T;
        QbpRunResult r = qbp_run(graph, syndrome, p, cfg);
        j["converged"] = r.converged;
        j["iterations"] = r.iterations_used;
        if (r.converged) {
            j["estimate"] = letters_from_symbols(r.hard);
            j["estimate_support"] = support_json(r.hard);
        }
        if (truth_pauli)
            j["outcome"] = to_string(classify_quaternary_outcome(
                code, *truth_pauli,
                r.converged ? std::optional<PauliVector>(pauli_from_symbols(r.hard))
                            : std::nullopt));
    } else {
        QuatGraph graph(code);
        QGdResult r = qbpgd_decode(graph, syndrome, p, spec.qgd);
        j["converged"] = r.converged;
        j["rounds"] = r.rounds_used;
        auto trace = nlohmann::json::array();
        for (auto [v, sym] : r.trace)
            trace.push_back({v + 1, std::string(1, "IXYZ"[sym])});
        j["trace"] = trace;
        if (r.converged) {
            j["estimate"] = letters_from_symbols(r.estimate);
            j["estimate_support"] = support_json(r.estimate);
        }
        if (truth_pauli)
            j["outcome"] = to_string(classify_quaternary_outcome(
                code, *truth_pauli,
                r.converged ? std::optional<PauliVector>(pauli_from_symbols(r.estimate))
                            : std::nullopt));
    }
    write_output(o, j.dump(2) + "\n");
    return 0;
}

int cmd_sweep(const Opts& o) {
    if (o.p.empty()) throw std::runtime_error("sweep needs --p with at least one probability");
    for (std::size_t i = 1; i < o.p.size(); ++i)
        if (!(o.p[i] > o.p[i - 1]))
            throw std::runtime_error("sweep probabilities must be strictly increasing");
    CssCode code = load_code(o);
    DecoderSpec spec = decoder_spec(o);
    NoiseKind kind =
        decoder_is_quaternary(spec.kind) ? NoiseKind::Depolarizing : NoiseKind::BitFlip;
    StoppingRule stopping{o.max_trials, o.target_errors};
    std::vector<SweepRow> rows;
    for (double p : o.p) {
        TrialStats stats =
            run_trials(code, NoiseModel{kind, p}, spec, stopping, o.seed, o.workers);
        rows.push_back(make_sweep_row(code, spec, p, o.seed, stats));
    }
    write_output(o, o.format == "json" ? sweep_json(rows) : sweep_csv(rows));
    return 0;
}

int cmd_degeneracy(const Opts& o) {
    if (o.decoder != "bpgd-rd")
        throw std::runtime_error("degeneracy requires --decoder bpgd-rd");
    if (o.error_path.empty()) throw std::runtime_error("degeneracy needs --error FILE (the truth)");
    CssCode code = load_code(o);
    BitVector truth = BitVector::from_string(read_token(o.error_path));
    if (truth.size() != code.n())
        throw std::runtime_error("error length " + std::to_string(truth.size()) +
                                 ", expected n=" + std::to_string(code.n()));
    DegeneracyReport rep = degeneracy_experiment(code, truth, o.runs, noise_probability(o),
                                                 decoder_spec(o).gd, o.workers);
    std::ostringstream out;
    out << "# code=" << code.name() << " n=" << code.n() << " truth_weight=" << truth.weight()
        << " p=" << fmt(noise_probability(o)) << '\n';
    out << "# runs=" << rep.runs << " converged=" << rep.converged
        << " degenerate=" << rep.degenerate_runs << " logical=" << rep.logical_runs << '\n';
    out << "# idx frequency weight distance outcome\n";
    std::size_t limit = o.top == 0 ? rep.entries.size()
                                   : std::min<std::size_t>(o.top, rep.entries.size());
    for (std::size_t i = 0; i < limit; ++i) {
        const DegeneracyEntry& e = rep.entries[i];
        out << (i + 1) << ' ' << e.frequency << ' ' << e.weight << ' ' << e.distance_to_truth
            << ' ' << to_string(e.outcome) << '\n';
    }
    write_output(o, out.str());
    return 0;
}

int cmd_theorem1(const Opts& o) {
    CssCode code = load_code(o);
    std::vector<double> ps = o.p.empty() ? std::vector<double>{0.01, 0.05, 0.1, 0.2} : o.p;
    std::ostringstream out;
    out << "p p_dqml p_s ratio\n";
    bool ok = true;
    for (double p : ps) {
        oracle::SamplingRates r = oracle::sampling_error_rates(code, p);
        double ratio = r.p_dqml > 0 ? r.p_s / r.p_dqml : 1.0;
        bool row_ok = r.p_s >= r.p_dqml - 1e-12 && r.p_s <= 2.0 * r.p_dqml + 1e-12;
        out << fmt(p) << ' ' << fmt(r.p_dqml) << ' ' << fmt(r.p_s) << ' ' << fmt(ratio)
            << (row_ok ? "" : " VIOLATION") << '\n';
        ok = ok && row_ok;
    }
    write_output(o, out.str());
    if (!ok) {
        std::cerr << "factor-two bound violated\n";
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Syndrome decoders for CSS codes: belief propagation, guided decimation, and "
                 "exact small-instance references"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a flat key = value file (flags override)");

    // Flags are shared across subcommands; each subcommand reads the subset it
    // needs and validates its own requirements.
    Opts o;
    auto* code_opt = app.add_option("--code", o.code_path, "CSS code file (.code format)")
                         ->check(CLI::ExistingFile);
    app.add_option("--hgp", o.hgp_paths, "two alist files; the code is their hypergraph product")
        ->expected(2)
        ->check(CLI::ExistingFile)
        ->excludes(code_opt);
    app.add_option("--name", o.name, "name for a constructed code");
    app.add_option("--decoder", o.decoder, "bp, bpgd, bpgd-rd, qbp, or qbpgd")
        ->check(CLI::IsMember({"bp", "bpgd", "bpgd-rd", "qbp", "qbpgd"}));
    app.add_option("--p", o.p, "error probability (comma-separated list for sweeps)")
        ->delimiter(',');
    app.add_option("--T", o.T, "BP iterations (per decimation round where applicable)");
    app.add_option("--R", o.R, "decimation round budget; 0 means n");
    app.add_option("--K", o.K, "LLR saturation bound inside BP");
    app.add_option("--llr-max", o.llr_max, "pinned prior magnitude for decimated bits");
    app.add_option("--gamma-prime", o.gamma_prime, "randomized selection window width");
    app.add_option("--epsilon", o.epsilon, "pinned prior leak for quaternary decimation");
    app.add_option("--alpha", o.alpha, "min-sum scaling factor");
    app.add_option("--variant", o.variant, "check update rule")
        ->check(CLI::IsMember({"sum-product", "min-sum"}));
    app.add_option("--seed", o.seed, "master seed")->envname("QBPGD_SEED");
    app.add_option("--workers", o.workers, "worker threads for the trial loop");
    app.add_option("--max-trials", o.max_trials, "trial budget per sweep point");
    app.add_option("--target-errors", o.target_errors,
                   "stop a sweep point after this many block errors (0 = run all trials)");
    app.add_option("--out", o.out, "output file (default stdout)");
    app.add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--syndrome", o.syndrome_path, "file with a 0/1 syndrome string")
        ->check(CLI::ExistingFile);
    app.add_option("--error", o.error_path,
                   "file with the true error (0/1 string, or IXYZ for quaternary decoders)")
        ->check(CLI::ExistingFile);
    app.add_option("--runs", o.runs, "randomized decodes for the degeneracy census");
    app.add_option("--top", o.top, "degeneracy rows to print (0 = all)");

    CLI::App* validate =
        app.add_subcommand("validate", "parse a code and report its parameters")->fallthrough();
    CLI::App* decode =
        app.add_subcommand("decode", "decode one syndrome or injected error")->fallthrough();
    CLI::App* sweep =
        app.add_subcommand("sweep", "Monte Carlo block-error sweep over --p")->fallthrough();
    CLI::App* degeneracy =
        app.add_subcommand("degeneracy",
                           "repeated randomized decoding of one fixed error; estimate census")
            ->fallthrough();
    CLI::App* theorem1 =
        app.add_subcommand("theorem1",
                           "exact decoder error rates and the factor-two sandwich on small codes")
            ->fallthrough();
    CLI::App* construct =
        app.add_subcommand("construct-hgp", "build and save a hypergraph product code")
            ->fallthrough();

    CLI11_PARSE(app, argc, argv);

    // Degeneracy defaults to its only admissible decoder when the flag is absent.
    if (degeneracy->parsed() && app.count("--decoder") == 0) o.decoder = "bpgd-rd";

    try {
        if (validate->parsed()) return cmd_validate(o);
        if (decode->parsed()) return cmd_decode(o);
        if (sweep->parsed()) return cmd_sweep(o);
        if (degeneracy->parsed()) return cmd_degeneracy(o);
        if (theorem1->parsed()) return cmd_theorem1(o);
        if (construct->parsed()) return cmd_construct_hgp(o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
