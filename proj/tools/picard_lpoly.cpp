// picard_lpoly: L-polynomials of y^3 = f(x) at every good prime in a range.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <thread>

#include "picard.hpp"

using namespace picard;

namespace {

struct Options {
    std::string curve;
    u64 min_prime = 5;
    u64 max_prime = 100;
    u64 prime = 0;
    std::string format = "jsonl";
    std::string out;
    unsigned jobs = 1;
    u64 naive_fallback = 0;
    u64 oracle_bound = kDefaultEnumerationBound;
};

RunConfig to_config(const Options& o) {
    RunConfig cfg;
    cfg.curve = parse_curve(o.curve);
    cfg.min_prime = o.min_prime;
    cfg.max_prime = o.max_prime;
    cfg.format = o.format == "csv" ? OutputFormat::csv : OutputFormat::jsonl;
    cfg.jobs = o.jobs;
    cfg.naive_fallback = o.naive_fallback;
    cfg.oracle_bound = o.oracle_bound;
    return cfg;
}

void add_curve(CLI::App* cmd, Options& o) {
    cmd->add_option("--curve", o.curve, "f4,f3,f2,f1,f0 or f2,f1,f0 of a depressed model")->required();
}

void add_range(CLI::App* cmd, Options& o) {
    cmd->add_option("--min-prime", o.min_prime, "smallest prime considered")->capture_default_str();
    cmd->add_option("--max-prime", o.max_prime, "largest prime considered")->capture_default_str();
    cmd->add_option("--jobs", o.jobs, "worker threads (0 = all cores)")->capture_default_str();
    cmd->add_option("--naive-fallback", o.naive_fallback, "count points at non-ordinary split primes up to this bound")
        ->capture_default_str();
    cmd->add_option("--oracle-bound", o.oracle_bound, "largest field size the point counter will enumerate")
        ->capture_default_str();
}

void add_output(CLI::App* cmd, Options& o) {
    cmd->add_option("--format", o.format, "jsonl or csv")->check(CLI::IsMember({"jsonl", "csv"}))->capture_default_str();
    cmd->add_option("--out", o.out, "output file (default stdout)");
}

/// Writes to --out if given, else stdout.
template <class F>
void with_output(const Options& o, F&& f) {
    if (o.out.empty()) {
        f(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream file(o.out, std::ios::binary);
    if (!file) throw InputError("cannot open " + o.out + " for writing");
    f(file);
    if (!file.flush()) throw InputError("write to " + o.out + " failed");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact L-polynomials of Picard curves y^3 = f(x) from Cartier-Manin data"};
    app.require_subcommand(1);
    Options o;

    auto* compute = app.add_subcommand("compute", "one record per prime in the range, ascending");
    add_curve(compute, o);
    add_range(compute, o);
    add_output(compute, o);

    auto* lpoly = app.add_subcommand("lpoly", "record for a single prime");
    add_curve(lpoly, o);
    lpoly->add_option("--prime", o.prime, "the prime")->required();
    add_output(lpoly, o);
    lpoly->add_option("--naive-fallback", o.naive_fallback, "count points at non-ordinary split primes up to this bound");
    lpoly->add_option("--oracle-bound", o.oracle_bound, "largest field size the point counter will enumerate");

    auto* verify = app.add_subcommand("verify", "compare every computed L_p with point counts");
    add_curve(verify, o);
    add_range(verify, o);

    auto* stats = app.add_subcommand("stats", "classification counts and the non-ordinary split primes");
    add_curve(stats, o);
    add_range(stats, o);
    stats->add_option("--out", o.out, "output file (default stdout)");

    auto* psi = app.add_subcommand("psi", "coefficients of psi_f, ascending");
    add_curve(psi, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    if (o.jobs == 0) o.jobs = std::max(1u, std::thread::hardware_concurrency());

    try {
        RunConfig cfg = to_config(o);
        if (*compute) {
            with_output(o, [&](std::ostream& out) { cmd_compute(cfg, out); });
        } else if (*lpoly) {
            cfg.min_prime = cfg.max_prime = o.prime;
            cfg.validate();
            if (ff::sieve_primes(o.prime, o.prime).empty()) throw InputError(std::to_string(o.prime) + " is not prime");
            with_output(o, [&](std::ostream& out) { cmd_compute(cfg, out); });
        } else if (*verify) {
            return cmd_verify(cfg, std::cout, std::cerr);
        } else if (*stats) {
            const StatsSummary s = cmd_stats(cfg);
            with_output(o, [&](std::ostream& out) { out << format_stats(s) << '\n'; });
        } else if (*psi) {
            std::cout << cmd_psi(cfg.make_curve()) << '\n';
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const CapacityError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "computation failed: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
