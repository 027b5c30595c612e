#pragma once

// Batch driver: per-prime dispatch, ordered parallel execution, record
// serialization and the verify / stats / psi commands.

#include <algorithm>
#include <condition_variable>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "picard/cartier_manin.hpp"
#include "picard/curve_model.hpp"
#include "picard/errors.hpp"
#include "picard/ff/sieve.hpp"
#include "picard/lifting.hpp"
#include "picard/oracle_count.hpp"

namespace picard {

/// Split-ordinary primes below this bound are counted, not lifted.
inline constexpr u64 kSmallSplitBound = 53;

enum class Method { cm_lift_split, cm_lift_inert, naive, skipped_nonordinary, skipped_bad };

inline std::string_view to_string(Method m) {
    switch (m) {
        case Method::cm_lift_split: return "cm_lift_split";
        case Method::cm_lift_inert: return "cm_lift_inert";
        case Method::naive: return "naive";
        case Method::skipped_nonordinary: return "skipped_nonordinary";
        case Method::skipped_bad: return "skipped_bad";
    }
    return "?";
}

inline Method parse_method(std::string_view s) {
    for (Method m : {Method::cm_lift_split, Method::cm_lift_inert, Method::naive, Method::skipped_nonordinary,
                     Method::skipped_bad})
        if (to_string(m) == s) return m;
    throw InputError("unknown method '" + std::string(s) + "'");
}

inline PrimeClass parse_prime_class(std::string_view s) {
    for (PrimeClass c : {PrimeClass::bad, PrimeClass::split_ordinary, PrimeClass::split_nonordinary, PrimeClass::inert})
        if (to_string(c) == s) return c;
    throw InputError("unknown prime class '" + std::string(s) + "'");
}

struct PrimeRecord {
    u64 p = 0;
    PrimeClass cls = PrimeClass::bad;
    Method method = Method::skipped_bad;
    std::optional<LPolynomial> lpoly;

    friend bool operator==(const PrimeRecord&, const PrimeRecord&) = default;
};

/// A module error at one prime, tagged with the stage that raised it.
class PrimeFailure : public Error {
public:
    PrimeFailure(u64 p, std::string stage, const std::string& what)
        : Error("p = " + std::to_string(p) + ", stage " + stage + ": " + what), p_(p), stage_(std::move(stage)) {}
    u64 p() const noexcept { return p_; }
    const std::string& stage() const noexcept { return stage_; }

private:
    u64 p_;
    std::string stage_;
};

enum class OutputFormat { jsonl, csv };

struct RunConfig {
    std::vector<Int> curve;  // f4,f3,f2,f1,f0 or f2,f1,f0
    u64 min_prime = 5;
    u64 max_prime = 100;
    OutputFormat format = OutputFormat::jsonl;
    unsigned jobs = 1;
    u64 naive_fallback = 0;  // non-ordinary split primes p <= this are counted
    u64 oracle_bound = kDefaultEnumerationBound;

    void validate() const {
        if (min_prime < 5 || min_prime > max_prime || max_prime >= ff::kMaxModulus)
            throw InputError("prime range must satisfy 5 <= min <= max < 2^40");
        if (jobs == 0) throw InputError("--jobs must be positive");
        if (curve.size() != 3 && curve.size() != 5) throw InputError("curve needs 3 or 5 coefficients");
    }

    PicardCurve make_curve() const {
        if (curve.size() == 3) return PicardCurve::from_depressed(curve[0], curve[1], curve[2]);
        if (curve.size() == 5) return normalize(curve);
        throw InputError("curve needs 3 or 5 coefficients");
    }
};

/// Parses "a,b,c" or "a,b,c,d,e" into integers.
inline std::vector<Int> parse_curve(std::string_view text) {
    std::vector<Int> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = text.find(',', start);
        const std::string_view tok = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
        try {
            out.push_back(parse_int(tok));
        } catch (const Error&) {
            throw InputError("bad curve coefficient '" + std::string(tok) + "'");
        }
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (out.size() != 3 && out.size() != 5) throw InputError("curve needs 3 or 5 comma-separated coefficients");
    return out;
}

namespace detail {

template <class F>
auto at_stage(u64 p, const char* stage, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const PrimeFailure&) {
        throw;
    } catch (const Error& e) {
        throw PrimeFailure(p, stage, e.what());
    }
}

}  // namespace detail

/// Class of a good or bad prime, including the rank test at split primes.
inline PrimeClass classify(const PicardCurve& curve, u64 p) {
    switch (classify_prime(curve, p)) {
        case Reduction::bad: return PrimeClass::bad;
        case Reduction::inert: return PrimeClass::inert;
        case Reduction::split: break;
    }
    const auto cm = detail::at_stage(p, "cartier_manin", [&] { return split_matrices(curve, p, ff::find_cube_root_of_unity(p)); });
    return is_ordinary(cm) ? PrimeClass::split_ordinary : PrimeClass::split_nonordinary;
}

/// One prime through the dispatch: lift where the lift applies, count
/// points for small split-ordinary primes and, below naive_fallback, for
/// non-ordinary ones.
inline PrimeRecord compute_prime(const PicardCurve& curve, u64 p, u64 naive_fallback = 0,
                                 u64 oracle_bound = kDefaultEnumerationBound) {
    PrimeRecord r;
    r.p = p;
    auto naive = [&] {
        return detail::at_stage(p, "naive", [&] { return oracle_lpolynomial(curve, p, oracle_bound).L; });
    };
    switch (classify_prime(curve, p)) {
        case Reduction::bad:
            r.cls = PrimeClass::bad;
            r.method = Method::skipped_bad;
            return r;
        case Reduction::inert:
            r.cls = PrimeClass::inert;
            r.method = Method::cm_lift_inert;
            r.lpoly = detail::at_stage(p, "lift_inert", [&] { return lift_inert(curve, p).L; });
            return r;
        case Reduction::split: break;
    }
    const auto cm = detail::at_stage(p, "cartier_manin", [&] { return split_matrices(curve, p, ff::find_cube_root_of_unity(p)); });
    if (!is_ordinary(cm)) {
        r.cls = PrimeClass::split_nonordinary;
        if (p <= naive_fallback) {
            r.method = Method::naive;
            r.lpoly = naive();
        } else {
            r.method = Method::skipped_nonordinary;
        }
        return r;
    }
    r.cls = PrimeClass::split_ordinary;
    if (p < kSmallSplitBound) {
        r.method = Method::naive;
        r.lpoly = naive();
    } else {
        r.method = Method::cm_lift_split;
        r.lpoly = detail::at_stage(p, "lift_split", [&] { return lift_split(cm).L; });
    }
    return r;
}

/// Runs work(i) for i in [0, n) on `jobs` threads and hands the results to
/// sink in index order. At most `window` finished results wait for an
/// earlier one. The first exception stops the run and is rethrown.
template <class T>
void run_ordered(std::size_t n, unsigned jobs, const std::function<T(std::size_t)>& work,
                 const std::function<void(T&)>& sink, std::size_t window = 0) {
    if (n == 0) return;
    if (jobs <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            T v = work(i);
            sink(v);
        }
        return;
    }
    if (window == 0) window = std::max<std::size_t>(64, 16 * static_cast<std::size_t>(jobs));
    std::vector<std::optional<T>> ring(window);
    std::mutex m;
    std::condition_variable cv;
    std::size_t next_claim = 0, next_emit = 0;
    bool stop = false;
    std::exception_ptr error;

    auto fail = [&](std::exception_ptr e) {
        std::lock_guard lock(m);
        if (!error) error = e;
        stop = true;
        cv.notify_all();
    };

    auto worker = [&] {
        while (true) {
            std::size_t i;
            {
                std::unique_lock lock(m);
                cv.wait(lock, [&] { return stop || next_claim >= n || next_claim < next_emit + window; });
                if (stop || next_claim >= n) return;
                i = next_claim++;
            }
            try {
                T v = work(i);
                std::lock_guard lock(m);
                ring[i % window] = std::move(v);
            } catch (...) {
                fail(std::current_exception());
                return;
            }
            cv.notify_all();
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);

    while (true) {
        std::optional<T> v;
        {
            std::unique_lock lock(m);
            cv.wait(lock, [&] { return stop || next_emit >= n || ring[next_emit % window].has_value(); });
            if (stop || next_emit >= n) break;
            v = std::move(ring[next_emit % window]);
            ring[next_emit % window].reset();
            ++next_emit;
        }
        cv.notify_all();
        try {
            sink(*v);
        } catch (...) {
            fail(std::current_exception());
            break;
        }
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

inline std::string csv_header() { return "p,class,method,a0,a1,a2,a3,a4,a5,a6"; }

inline std::string format_record(const PrimeRecord& r, OutputFormat fmt) {
    if (fmt == OutputFormat::csv) {
        std::string line = std::to_string(r.p) + ',' + std::string(to_string(r.cls)) + ',' + std::string(to_string(r.method));
        for (std::size_t i = 0; i < 7; ++i) {
            line += ',';
            if (r.lpoly) line += to_string((*r.lpoly)[i]);
        }
        return line;
    }
    nlohmann::ordered_json j;
    j["p"] = r.p;
    j["class"] = to_string(r.cls);
    j["method"] = to_string(r.method);
    if (r.lpoly) {
        auto arr = nlohmann::ordered_json::array();
        for (Int c : r.lpoly->a) arr.push_back(to_string(c));
        j["L"] = std::move(arr);
    } else {
        j["L"] = nullptr;
    }
    return j.dump();
}

inline PrimeRecord parse_record(std::string_view line, OutputFormat fmt) {
    PrimeRecord r;
    if (fmt == OutputFormat::csv) {
        std::vector<std::string> f;
        std::string cur;
        for (char ch : line) {
            if (ch == ',') {
                f.push_back(cur);
                cur.clear();
            } else {
                cur += ch;
            }
        }
        f.push_back(cur);
        if (f.size() != 10) throw InputError("CSV record needs 10 fields");
        r.p = static_cast<u64>(parse_int(f[0]));
        r.cls = parse_prime_class(f[1]);
        r.method = parse_method(f[2]);
        if (!f[3].empty()) {
            LPolynomial L;
            for (std::size_t i = 0; i < 7; ++i) L.a[i] = parse_int(f[3 + i]);
            r.lpoly = L;
        }
        return r;
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
        r.p = j.at("p").get<u64>();
        r.cls = parse_prime_class(j.at("class").get<std::string>());
        r.method = parse_method(j.at("method").get<std::string>());
        const auto& arr = j.at("L");
        if (!arr.is_null()) {
            if (!arr.is_array() || arr.size() != 7) throw InputError("L must hold 7 coefficients");
            LPolynomial L;
            for (std::size_t i = 0; i < 7; ++i) L.a[i] = parse_int(arr[i].get<std::string>());
            r.lpoly = L;
        }
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed JSON record: ") + e.what());
    }
    return r;
}

/// Every prime in [min, max] in ascending order, whatever the worker count.
inline void cmd_compute(const RunConfig& cfg, const std::function<void(const PrimeRecord&)>& sink) {
    cfg.validate();
    const PicardCurve curve = cfg.make_curve();
    const auto primes = ff::sieve_primes(cfg.min_prime, cfg.max_prime);
    run_ordered<PrimeRecord>(
        primes.size(), cfg.jobs,
        [&](std::size_t i) { return compute_prime(curve, primes[i], cfg.naive_fallback, cfg.oracle_bound); },
        [&](PrimeRecord& r) { sink(r); });
}

inline void cmd_compute(const RunConfig& cfg, std::ostream& out) {
    if (cfg.format == OutputFormat::csv) out << csv_header() << '\n';
    cmd_compute(cfg, [&](const PrimeRecord& r) { out << format_record(r, cfg.format) << '\n'; });
}

inline std::vector<PrimeRecord> compute_records(const RunConfig& cfg) {
    std::vector<PrimeRecord> out;
    cmd_compute(cfg, [&](const PrimeRecord& r) { out.push_back(r); });
    return out;
}

/// Checks one record against the oracle and the mod-p, mod-3 and mod-2
/// invariants. Returns a description of the first discrepancy.
inline std::optional<std::string> check_record(const PicardCurve& curve, const PrimeRecord& r, u64 oracle_bound) {
    const u64 p = r.p;
    const Reduction red = classify_prime(curve, p);
    const bool has_L = r.method == Method::cm_lift_split || r.method == Method::cm_lift_inert || r.method == Method::naive;
    if (has_L != r.lpoly.has_value()) return "lpoly presence does not match method";
    if (red == Reduction::bad) {
        if (r.cls != PrimeClass::bad || r.method != Method::skipped_bad) return "bad prime not skipped";
        return std::nullopt;
    }
    const OracleResult o = oracle_lpolynomial(curve, p, oracle_bound);
    const Int P = static_cast<Int>(p);
    if (red == Reduction::split) {
        const auto cm = split_matrices(curve, p, ff::find_cube_root_of_unity(p));
        const bool ord = is_ordinary(cm);
        if (ord != (o.L[3] % P != 0)) return "rank of the Cartier-Manin matrix disagrees with the central coefficient";
        if (r.cls != (ord ? PrimeClass::split_ordinary : PrimeClass::split_nonordinary)) return "wrong class";
        if (r.lpoly && r.lpoly->reduce(p) != reversed_charpoly_mod_p(cm)) return "L mod p differs from det(1 - A T)";
    } else {
        if (r.cls != PrimeClass::inert) return "wrong class";
        const auto cm = inert_matrices(curve, p);
        if (r.lpoly) {
            if (r.lpoly->reduce(p) != reversed_charpoly_mod_p(cm)) return "L mod p differs from det(1 - A T)";
            const bool even = inert_t_mod_2(curve, p) == 0;
            const ff::PolyFp want = even ? ff::PolyFp(2, {1, 0, 1, 0, 1, 0, 1}) : ff::PolyFp(2, {1, 0, 0, 0, 0, 0, 1});
            if (r.lpoly->reduce(2) != want) return "L mod 2 disagrees with the psi root test";
        }
    }
    if (!r.lpoly) return std::nullopt;
    const LPolynomial& L = *r.lpoly;
    if (L != o.L) {
        std::ostringstream os;
        os << "L = " << L << " but point counts give " << o.L;
        return os.str();
    }
    if (!L.satisfies_functional_equation(p)) return "functional equation fails";
    if (L.evaluate(1) <= 0) return "L(1) is not positive";
    if (L.reduce(3) != lpoly_mod3(curve, p)) return "L mod 3 differs from the factor-degree product";
    return std::nullopt;
}

/// 0 if every record matches the oracle and all invariants, 1 otherwise
/// (the first counterexample goes to err). `tamper` lets tests corrupt
/// records before they are checked.
inline int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err,
                      const std::function<void(PrimeRecord&)>& tamper = {}) {
    cfg.validate();
    if (static_cast<u128>(cfg.max_prime) * cfg.max_prime > cfg.oracle_bound)
        throw InputError("max prime exceeds the oracle enumeration bound");
    const PicardCurve curve = cfg.make_curve();
    const auto primes = ff::sieve_primes(cfg.min_prime, cfg.max_prime);
    struct Outcome {
        PrimeRecord record;
        std::optional<std::string> problem;
    };
    std::optional<std::string> first;
    std::size_t checked = 0, with_L = 0;
    run_ordered<Outcome>(
        primes.size(), cfg.jobs,
        [&](std::size_t i) {
            Outcome o;
            try {
                o.record = compute_prime(curve, primes[i], cfg.naive_fallback, cfg.oracle_bound);
                if (tamper) tamper(o.record);
                o.problem = check_record(curve, o.record, cfg.oracle_bound);
            } catch (const Error& e) {
                o.record.p = primes[i];
                o.problem = e.what();
            }
            return o;
        },
        [&](Outcome& o) {
            ++checked;
            if (o.record.lpoly) ++with_L;
            if (o.problem && !first) first = "p = " + std::to_string(o.record.p) + ": " + *o.problem;
        });
    if (first) {
        err << "verification failed at " << *first << '\n';
        return 1;
    }
    out << "verified " << checked << " primes (" << with_L << " L-polynomials) in [" << cfg.min_prime << ", "
        << cfg.max_prime << "]\n";
    return 0;
}

struct StatsSummary {
    std::map<PrimeClass, std::size_t> counts;
    std::vector<u64> nonordinary;
    double ordinary_fraction = 0;
};

inline StatsSummary cmd_stats(const RunConfig& cfg) {
    cfg.validate();
    const PicardCurve curve = cfg.make_curve();
    const auto primes = ff::sieve_primes(cfg.min_prime, cfg.max_prime);
    StatsSummary s;
    for (PrimeClass c : {PrimeClass::bad, PrimeClass::split_ordinary, PrimeClass::split_nonordinary, PrimeClass::inert})
        s.counts[c] = 0;
    run_ordered<PrimeClass>(
        primes.size(), cfg.jobs, [&](std::size_t i) { return classify(curve, primes[i]); },
        [&](PrimeClass& c) {
            const std::size_t i = s.counts[PrimeClass::bad] + s.counts[PrimeClass::split_ordinary] +
                                  s.counts[PrimeClass::split_nonordinary] + s.counts[PrimeClass::inert];
            ++s.counts[c];
            if (c == PrimeClass::split_nonordinary) s.nonordinary.push_back(primes[i]);
        });
    const std::size_t split = s.counts[PrimeClass::split_ordinary] + s.counts[PrimeClass::split_nonordinary];
    s.ordinary_fraction = split ? static_cast<double>(s.counts[PrimeClass::split_ordinary]) / static_cast<double>(split) : 0.0;
    return s;
}

inline std::string format_stats(const StatsSummary& s) {
    nlohmann::ordered_json j;
    for (const auto& [c, n] : s.counts) j["counts"][std::string(to_string(c))] = n;
    j["split_nonordinary_primes"] = s.nonordinary;
    j["ordinary_fraction"] = s.ordinary_fraction;
    return j.dump();
}

/// The ten coefficients of psi_f, ascending, space separated.
inline std::string cmd_psi(const PicardCurve& curve) {
    std::string out;
    for (std::size_t i = 0; i < 10; ++i) {
        if (i) out += ' ';
        out += to_string(curve.psi().coeffs[i]);
    }
    return out;
}

}  // namespace picard
