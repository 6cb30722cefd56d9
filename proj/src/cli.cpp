#include "zetafrac/cli.hpp"

#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <optional>
#include <ostream>
#include <thread>
#include <variant>

#include <CLI11.hpp>

#include "zetafrac/report.hpp"
#include "zetafrac/scanner.hpp"
#include "zetafrac/series.hpp"
#include "zetafrac/theorems.hpp"

namespace zetafrac::cli {

namespace {

struct GlobalOptions {
    bool json = false;
    bool csv = false;
    bool verbose = false;
    unsigned long precision_bits = 0;
    unsigned max_rounds = kDefaultMaxRounds;

    EvalOptions eval() const { return EvalOptions{max_rounds, precision_bits}; }
};

unsigned thread_count()
{
    if (const char* env = std::getenv("ZETAFRAC_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) {
                return static_cast<unsigned>(v);
            }
        } catch (const std::logic_error&) {
        }
    }
    return std::max(1U, std::thread::hardware_concurrency());
}

int exit_for(Verdict v)
{
    return v == Verdict::Inconclusive ? kInconclusive : v == Verdict::False ? kIntegrity : kOk;
}

void emit(const ClaimResult& r, const GlobalOptions& g, std::ostream& out)
{
    if (g.json) {
        out << to_json(r).dump() << "\n";
    } else {
        out << to_text(r) << "\n";
    }
}

int report_integrity(const IntegrityError& e, const GlobalOptions& g, std::ostream& out, std::ostream& err)
{
    emit(e.evidence(), g, out);
    out.flush();
    err << e.what() << "\n";
    return kIntegrity;
}

using Slot = std::variant<std::monostate, ClaimResult, IntegrityError, std::string>;

// Evaluates the claim for every n in [from, to] on a worker pool and prints
// the results in ascending n as soon as the next one is ready.
int run_range(const std::string& claim, unsigned long from, unsigned long to, const Rational& x,
              const GlobalOptions& g, std::ostream& out, std::ostream& err)
{
    const std::size_t count = to - from + 1;
    std::vector<Slot> slots(count);
    std::mutex mu;
    std::condition_variable cv;
    std::size_t next = 0;
    bool stop = false;
    const EvalOptions opts = g.eval();

    auto worker = [&] {
        for (;;) {
            std::size_t idx = 0;
            {
                std::lock_guard lock(mu);
                if (stop || next >= count) {
                    return;
                }
                idx = next++;
            }
            Slot result;
            try {
                result = check_claim(claim, from + idx, opts, x);
            } catch (const IntegrityError& e) {
                result = e;
            } catch (const std::exception& e) {
                result = std::string(e.what());
            }
            {
                std::lock_guard lock(mu);
                slots[idx] = std::move(result);
            }
            cv.notify_all();
        }
    };

    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_count(), count));
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < workers; ++i) {
        pool.emplace_back(worker);
    }
    auto halt = [&] {
        {
            std::lock_guard lock(mu);
            stop = true;
        }
        for (auto& t : pool) {
            t.join();
        }
    };

    int code = kOk;
    for (std::size_t idx = 0; idx < count; ++idx) {
        Slot slot;
        {
            std::unique_lock lock(mu);
            cv.wait(lock, [&] { return !std::holds_alternative<std::monostate>(slots[idx]); });
            slot = std::move(slots[idx]);
        }
        if (auto* r = std::get_if<ClaimResult>(&slot)) {
            emit(*r, g, out);
            code = std::max(code, exit_for(r->verdict));
            if (g.verbose && (idx + 1) % 50 == 0) {
                err << claim << ": " << (idx + 1) << "/" << count << " done\n";
            }
        } else if (auto* e = std::get_if<IntegrityError>(&slot)) {
            halt();
            return report_integrity(*e, g, out, err);
        } else {
            halt();
            err << "error at n=" << (from + idx) << ": " << std::get<std::string>(slot) << "\n";
            return kUsage;
        }
    }
    halt();
    return code;
}

bool parse_integer_exponent(const std::string& text, unsigned long& value)
{
    try {
        const Rational r = Rational::parse(text);
        if (r.is_integer() && r.sign() > 0 && r.num().fits_ulong_p()) {
            value = r.num().get_ui();
            return true;
        }
    } catch (const DomainError&) {
    }
    return false;
}

}  // namespace

int dispatch(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Certified checks relating floor(1/(zeta(n)-1)), fractional parts of (4/3)^n "
                 "and the prime zeta function",
                 "zetafrac"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "zetafrac.toml", "key=value config file (flags win)");

    GlobalOptions g;
    app.add_flag("--json", g.json, "JSON-lines output");
    app.add_flag("--csv", g.csv, "CSV output (scan)");
    app.add_flag("-v,--verbose", g.verbose, "Progress on stderr");
    app.add_option("--precision-bits", g.precision_bits, "Base dyadic precision (0 = automatic 3n+128)");
    app.add_option("--max-rounds", g.max_rounds, "Refinement rounds before INCONCLUSIVE")
        ->check(CLI::NonNegativeNumber);

    unsigned long n = 0;
    auto* cf = app.add_subcommand("cf-term", "Second continued-fraction term floor(1/(zeta(n)-1))");
    cf->add_option("n", n, "Exponent n >= 2")->required()->check(CLI::Range(2UL, 1000000UL));

    auto* kcmd = app.add_subcommand("k", "k in floor(1/(zeta(n)-1)) = 2^n - floor((4/3)^n) - k");
    kcmd->add_option("n", n, "Exponent n >= 2")->required()->check(CLI::Range(2UL, 1000000UL));

    std::string claim;
    unsigned long from = 0;
    unsigned long to = 0;
    std::string x_text = "2/3";
    auto* check = app.add_subcommand("check", "Certify a claim for every n in a range");
    check->add_option("claim", claim, "Claim id")->required()->check(CLI::IsMember(claim_ids()));
    check->add_option("--from", from, "First n")->required();
    check->add_option("--to", to, "Last n")->required();
    check->add_option("--x", x_text, "Rational x in (1/2, 3/4) for prop3.5");

    ScanConfig scfg;
    std::string threshold_text = "eps";
    bool no_prefilter = false;
    bool resume = false;
    std::optional<std::uint64_t> stop_after;
    std::optional<unsigned> scan_workers;
    auto* scan_cmd = app.add_subcommand("scan", "Exact scan of {(p/q)^n} against a threshold");
    scan_cmd->add_option("--p", scfg.p, "Numerator p");
    scan_cmd->add_option("--q", scfg.q, "Denominator q");
    scan_cmd->add_option("--from", scfg.n_min, "First n");
    scan_cmd->add_option("--to", scfg.n_max, "Last n");
    scan_cmd->add_option("--threshold", threshold_text, "'eps' for eps(n), or a rational such as 1e-9");
    scan_cmd->add_option("--chunk", scfg.chunk_size, "n values per work unit");
    scan_cmd->add_option("--stride", scfg.sample_stride, "Emit every stride-th n (0 = off)");
    scan_cmd->add_flag("--no-prefilter", no_prefilter, "Decide every n exactly");
    scan_cmd->add_option("--checkpoint", scfg.checkpoint_path, "Checkpoint file");
    scan_cmd->add_flag("--resume", resume, "Continue from --checkpoint");
    scan_cmd->add_option("--stop-after", stop_after, "Stop once n reaches this value (simulated interrupt)");
    scan_cmd->add_option("--workers", scan_workers, "Worker threads (default ZETAFRAC_THREADS)");

    std::string s_text;
    auto* gap = app.add_subcommand("prime-gap", "1 - eps(s) < 1/P(s) - 1/(zeta(s)-1) < 1 + delta(s)");
    gap->add_option("s", s_text, "Exponent s >= 7 (non-integers use the float contract)")->required();

    auto* egypt = app.add_subcommand("egypt", "Check that zeta(n) is not 1 + 1/m when k = 2");
    egypt->add_option("n", n, "Exponent n >= 2")->required()->check(CLI::Range(2UL, 1000000UL));

    auto* mclass = app.add_subcommand("m-class", "Window index m of {1/(zeta(n)-1)} + {(2/3)^n/(zeta(n)-1)}");
    mclass->add_option("n", n, "Exponent n >= 2")->required()->check(CLI::Range(2UL, 1000000UL));

    std::vector<const char*> cargv;
    cargv.reserve(argv.size());
    for (const auto& a : argv) {
        cargv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(cargv.size()), cargv.data());
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        const EvalOptions opts = g.eval();
        if (cf->parsed()) {
            const BigInt a1 = cf_second_term(n, opts.max_rounds, opts.precision_bits);
            if (g.json) {
                out << nlohmann::ordered_json{{"n", n}, {"cf_second_term", a1.get_str()}}.dump() << "\n";
            } else {
                out << a1.get_str() << "\n";
            }
            return kOk;
        }
        if (kcmd->parsed()) {
            const KRecord rec = classify_k(n, opts);
            if (g.json) {
                nlohmann::ordered_json j = to_json(to_claim(rec, "thm1"));
                j["floor_lhs"] = rec.floor_lhs.get_str();
                j["floor_pow"] = rec.floor_pow.get_str();
                j["frac_sum"] = enclosure_json(rec.frac_sum_enclosure);
                j["frac_sum_verdict"] = std::string(to_string(rec.sandwich));
                out << j.dump() << "\n";
            } else {
                out << rec.k << "\n";
            }
            return exit_for(rec.sandwich);
        }
        if (check->parsed()) {
            if (to < from) {
                err << "--to must not be below --from\n";
                return kUsage;
            }
            if (from < claim_min_n(claim)) {
                err << "claim " << claim << " needs n >= " << claim_min_n(claim) << "\n";
                return kUsage;
            }
            return run_range(claim, from, to, Rational::parse(x_text), g, out, err);
        }
        if (scan_cmd->parsed()) {
            if (threshold_text == "eps") {
                scfg.mode = ThresholdMode::EpsilonAdaptive;
            } else {
                scfg.mode = ThresholdMode::Fixed;
                scfg.threshold = Rational::parse(threshold_text);
            }
            scfg.prefilter = !no_prefilter;
            scfg.workers = scan_workers.value_or(thread_count());
            if (resume && scfg.checkpoint_path.empty()) {
                err << "--resume needs --checkpoint\n";
                return kUsage;
            }
            if (!g.json) {
                out << csv_header() << "\n";
            }
            ScanControl control;
            control.resume = resume;
            control.stop_after = stop_after;
            const ScanSummary summary = scan(
                scfg,
                [&](const ScanRecord& r) {
                    out << (g.json ? to_json_line(r) : to_csv(r)) << "\n";
                },
                control);
            out << summary_json(scfg, summary) << "\n";
            if (g.verbose) {
                err << "scanned " << summary.scanned << " values, " << summary.hits.size() << " hits\n";
            }
            return kOk;
        }
        if (gap->parsed()) {
            unsigned long s_int = 0;
            ClaimResult r;
            if (parse_integer_exponent(s_text, s_int)) {
                r = check_prime_gap(s_int, opts);
            } else {
                const Rational s = Rational::parse(s_text);
                r = check_prime_gap_real(static_cast<long double>(s.to_double()), s_text);
            }
            emit(r, g, out);
            return exit_for(r.verdict);
        }
        if (egypt->parsed()) {
            const ClaimResult r = check_egypt(n, opts);
            emit(r, g, out);
            return exit_for(r.verdict);
        }
        if (mclass->parsed()) {
            const MRecord rec = classify_m(n, opts);
            if (g.json) {
                out << to_json(to_claim(rec)).dump() << "\n";
            } else if (rec.m) {
                out << *rec.m << "\n";
            } else {
                out << to_string(rec.verdict) << "\n";
            }
            return exit_for(rec.verdict);
        }
    } catch (const IntegrityError& e) {
        return report_integrity(e, g, out, err);
    } catch (const StraddlesInteger& e) {
        err << e.what() << "\n";
        return kInconclusive;
    } catch (const DomainError& e) {
        err << "usage error: " << e.what() << "\n" << app.help();
        return kUsage;
    } catch (const ResumeError& e) {
        err << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

}  // namespace zetafrac::cli
