// sppolar: construct, analyse, simulate and verify shortened and punctured
// polar codes.

#include "sppolar/codec.hpp"
#include "sppolar/construction.hpp"
#include "sppolar/experiments.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

using namespace sppolar;

namespace {

std::size_t parse_mu_option(const std::string& s)
{
    if (s == "exact" || s == "inf")
        return kExactAlphabet;
    const std::size_t mu = std::stoul(s);
    if (mu == 0)
        throw std::invalid_argument("mu must be positive");
    return mu;
}

// Writes to `path`, or stdout when path is empty or "-".
class Output {
public:
    explicit Output(const std::string& path)
    {
        if (!path.empty() && path != "-") {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_)
                throw std::runtime_error("cannot open " + path + " for writing");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

CodeSpec load_code(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    return read_code_spec(in);
}

std::vector<std::uint8_t> parse_bits(const std::string& text)
{
    std::vector<std::uint8_t> bits;
    for (char c : text) {
        if (c == '0' || c == '1')
            bits.push_back(static_cast<std::uint8_t>(c - '0'));
        else if (c != ',' && c != ' ')
            throw std::invalid_argument(std::string("not a bit: ") + c);
    }
    return bits;
}

std::string bits_text(const std::vector<std::uint8_t>& bits)
{
    std::string s;
    for (auto b : bits)
        s.push_back(static_cast<char>('0' + b));
    return s;
}

// Comma-separated labels, or one label per character when no comma is present.
std::vector<std::size_t> parse_outputs(const std::string& text, const BMChannel& w)
{
    std::vector<std::size_t> y;
    if (text.find(',') == std::string::npos) {
        for (char c : text)
            y.push_back(w.symbol(std::string(1, c)));
        return y;
    }
    std::stringstream ss(text);
    for (std::string label; std::getline(ss, label, ',');)
        y.push_back(w.symbol(label));
    return y;
}

struct Settings {
    std::string channel = "bsc:0.11";
    double p0 = 0.5;
    std::string mode = "shortened";
    std::string mu = "128";
    unsigned workers = 0;
    std::string out;
};

void add_common(CLI::App* cmd, Settings& s)
{
    cmd->add_option("--channel", s.channel, "bsc:<p>, bec:<eps>, none, or bmc:<w0 row>/<w1 row>")
        ->capture_default_str();
    cmd->add_option("--mode", s.mode, "shortened or punctured")->capture_default_str();
    cmd->add_option("--mu", s.mu, "output alphabet budget, or 'exact'")->capture_default_str();
    cmd->add_option("--workers", s.workers, "worker threads, 0 for all cores")->capture_default_str();
    cmd->add_option("-o,--out", s.out, "output file (default stdout)");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Shortened and punctured polar codes: construction, simulation and verification."};
    app.set_config("--config", "", "key = value configuration file; command-line flags take precedence");
    app.require_subcommand(1);

    // construct
    Settings cs;
    std::size_t c_m = 0;
    double c_rate = 0.5;
    std::optional<std::size_t> c_info;
    auto* construct = app.add_subcommand("construct", "build a code and write its specification");
    add_common(construct, cs);
    construct->add_option("--p0", cs.p0, "P(X = 0)")->capture_default_str();
    construct->add_option("-M,--M", c_m, "code length")->required()->check(CLI::PositiveNumber);
    construct->add_option("--rate", c_rate, "information rate; info size is round(rate * M)")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    construct->add_option("--info", c_info, "information set size (overrides --rate)");

    // polarize
    Settings ps;
    std::vector<std::size_t> p_lengths;
    std::size_t p_a = 0;
    unsigned p_t = 0, p_nmin = 0, p_nmax = 0;
    double p_beta = 0.3;
    std::optional<double> p_threshold;
    auto* polarize = app.add_subcommand("polarize", "fractions of good indices against 2^(-M^beta)");
    add_common(polarize, ps);
    polarize->add_option("--p0", ps.p0, "P(X = 0)")->capture_default_str();
    polarize->add_option("-M,--M", p_lengths, "code lengths")->delimiter(',');
    polarize->add_option("--a", p_a, "sweep M = a * 2^(n - t) ...");
    polarize->add_option("--t", p_t, "... with this t ...");
    polarize->add_option("--n-min", p_nmin, "... for n from n-min ...");
    polarize->add_option("--n-max", p_nmax, "... to n-max");
    polarize->add_option("--beta", p_beta, "exponent in 2^(-M^beta), in (0, 1/2)")->capture_default_str();
    polarize->add_option("--threshold", p_threshold, "absolute threshold replacing 2^(-M^beta)");

    // simulate
    Settings ss;
    ss.channel = "bec:0.5";
    SimulateConfig sim;
    std::string s_code;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo frame error rate under SC decoding");
    add_common(simulate, ss);
    simulate->add_option("-M,--M", sim.m, "code length")->capture_default_str();
    simulate->add_option("--rate", sim.rate, "information rate")->capture_default_str()->check(CLI::Range(0.0, 1.0));
    simulate->add_option("--trials", sim.trials, "number of frames")->capture_default_str();
    simulate->add_option("--seed", sim.seed, "64-bit seed")->capture_default_str();
    simulate->add_flag("--min-sum", sim.min_sum, "min-sum check-node update instead of the exact one");
    simulate->add_option("--code", s_code, "use this code specification instead of constructing one");

    // verify
    VerifyConfig vc;
    std::vector<std::string> v_suites;
    std::string v_fault;
    auto* verify = app.add_subcommand("verify", "run the verification suites");
    verify->add_option("--suite", v_suites, "suite to run (repeatable; default all)");
    verify->add_option("--trials", vc.trials, "random trials per case")->capture_default_str();
    verify->add_option("--seed", vc.seed, "64-bit seed")->capture_default_str();
    verify->add_option("--fault", v_fault, "corrupt one table cell, e.g. minus:A:S");

    // encode / decode
    std::string e_code, e_data, e_frozen;
    auto* encode = app.add_subcommand("encode", "encode data bits with a code specification");
    encode->add_option("--code", e_code, "code specification file")->required();
    encode->add_option("--data", e_data, "data bits, e.g. 0110")->required();
    encode->add_option("--frozen", e_frozen, "frozen bit values (default all zero)");

    std::string d_code, d_y, d_frozen;
    bool d_min_sum = false;
    auto* decode = app.add_subcommand("decode", "SC-decode channel outputs with a code specification");
    decode->add_option("--code", d_code, "code specification file")->required();
    decode->add_option("--y", d_y, "channel output labels, e.g. 01?1 or 0,1,?,1")->required();
    decode->add_option("--frozen", d_frozen, "frozen bit values (default all zero)");
    decode->add_flag("--min-sum", d_min_sum, "min-sum check-node update");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*construct) {
            const std::size_t count = c_info ? *c_info : info_count(c_m, c_rate);
            const CodeSpec spec = construct_code(c_m, cs.channel, cs.p0, rate_matching_from_string(cs.mode),
                                                 parse_mu_option(cs.mu), count, cs.workers);
            Output out(cs.out);
            write_code_spec(out.stream(), spec);
        } else if (*polarize) {
            PolarizeConfig config;
            config.channel = ps.channel;
            config.p0 = ps.p0;
            config.mode = rate_matching_from_string(ps.mode);
            config.mu = parse_mu_option(ps.mu);
            config.beta = p_beta;
            config.threshold = p_threshold;
            config.workers = ps.workers;
            config.lengths = p_lengths;
            if (p_a != 0) {
                for (unsigned n = p_nmin; n <= p_nmax; ++n) {
                    if (n < p_t)
                        throw std::invalid_argument("n must be at least t");
                    config.lengths.push_back(p_a << (n - p_t));
                }
            }
            if (config.lengths.empty())
                throw std::invalid_argument("give --M or the --a/--t/--n-min/--n-max sweep");
            const auto rows = run_polarize(config);
            Output out(ps.out);
            write_polarize_csv(out.stream(), config, rows);
        } else if (*simulate) {
            sim.channel = ss.channel;
            sim.mode = rate_matching_from_string(ss.mode);
            sim.mu = parse_mu_option(ss.mu);
            sim.workers = ss.workers;
            SimulateResult r;
            if (!s_code.empty()) {
                const CodeSpec code = load_code(s_code);
                sim.channel = code.channel;
                sim.m = code.length();
                sim.mode = code.pattern.mode;
                sim.mu = code.mu;
                sim.rate = static_cast<double>(code.info_size()) / static_cast<double>(code.length());
                r = run_simulate(sim, code);
            } else {
                r = run_simulate(sim);
            }
            Output out(ss.out);
            write_simulate_csv(out.stream(), sim, r);
        } else if (*verify) {
            if (!v_fault.empty())
                vc.fault = parse_table_cell(v_fault);
            if (v_suites.empty())
                v_suites = suite_names();
            bool all_ok = true;
            for (const std::string& name : v_suites) {
                const SuiteResult r = run_suite(name, vc);
                std::cout << (r.ok() ? "PASS " : "FAIL ") << r.name << ": " << r.passed << "/" << r.checks
                          << " checks, worst deviation " << format_number(r.worst) << '\n';
                for (const std::string& f : r.failures)
                    std::cout << "  failed: " << f << '\n';
                all_ok = all_ok && r.ok();
            }
            return all_ok ? 0 : 1;
        } else if (*encode) {
            const CodeSpec code = load_code(e_code);
            const auto x = sc_encode(parse_bits(e_data), code, parse_bits(e_frozen));
            std::cout << bits_text(x) << '\n';
        } else if (*decode) {
            const CodeSpec code = load_code(d_code);
            ScDecoder decoder(code, DecoderOptions{d_min_sum}, parse_bits(d_frozen));
            const DecodeResult r = decoder.decode(parse_outputs(d_y, decoder.channel()));
            std::cout << "u_hat " << bits_text(r.u_hat) << '\n' << "data " << bits_text(r.data) << '\n';
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
