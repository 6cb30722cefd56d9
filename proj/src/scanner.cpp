#include "zetafrac/scanner.hpp"

#include <atomic>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace zetafrac {

namespace {

constexpr double kLog10Of2 = 0.30102999566398119521;
// log10(10/9), the per-step growth of the margin against (9/10)^n.
constexpr double kLog10TenNinths = 0.045757490560675125410;

double log2_ratio(const BigInt& num, const BigInt& den)
{
    long en = 0;
    long ed = 0;
    const double mn = mpz_get_d_2exp(&en, num.get_mpz_t());
    const double md = mpz_get_d_2exp(&ed, den.get_mpz_t());
    return std::log2(mn) - std::log2(md) + static_cast<double>(en - ed);
}

// log2 eps(n) = 2 log2(4^n + 3^n) - n log2 18
long double log2_epsilon(std::uint64_t n)
{
    const auto x = static_cast<long double>(n);
    const long double log2_sum = 2.0L * x + std::log1p(std::pow(0.75L, x)) / std::log(2.0L);
    return 2.0L * log2_sum - x * std::log2(18.0L);
}

BigInt ui_pow(unsigned long base, std::uint64_t e)
{
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), base, e);
    return r;
}

struct LocalMin {
    BigInt rem;
    BigInt q_pow;
    double log2 = 0;
};

struct ChunkResult {
    std::vector<ScanRecord> records;  // ascending n
    std::vector<bool> local_min;      // parallel to records
    std::uint64_t exact_checks = 0;
    std::optional<std::uint64_t> margin_n;
    double margin = 0;
};

class ChunkScanner {
public:
    explicit ChunkScanner(const ScanConfig& cfg) : cfg_(cfg)
    {
        if (cfg.mode == ThresholdMode::Fixed && !cfg.threshold.is_zero()) {
            fixed_log2_ = cfg.threshold.log2_abs();
        }
    }

    ChunkResult run(std::uint64_t first, std::uint64_t last) const
    {
        ChunkResult out;
        PowerStepper step(cfg_.p, cfg_.q, first);
        std::optional<LocalMin> best;
        for (std::uint64_t n = first;; ++n) {
            const BigInt& rem = step.remainder();
            const BigInt& q_pow = step.q_pow();
            const double lf = log2_ratio(rem, q_pow);

            const bool below = below_threshold(n, rem, q_pow, lf, out.exact_checks);

            bool is_min = false;
            if (!best || lf < best->log2 - 1e-6) {
                is_min = true;
            } else if (lf < best->log2 + 1e-6) {
                is_min = rem * best->q_pow < best->rem * q_pow;
            }
            if (is_min) {
                best = LocalMin{rem, q_pow, lf};
            }

            const double margin = lf * kLog10Of2 + static_cast<double>(n) * kLog10TenNinths;
            if (!out.margin_n || margin < out.margin) {
                out.margin_n = n;
                out.margin = margin;
            }

            const bool sampled = cfg_.sample_stride != 0 && n % cfg_.sample_stride == 0;
            if (below || sampled || is_min) {
                ScanRecord r;
                r.n = n;
                r.frac = Rational::from_coprime(rem, q_pow);
                r.below_threshold = below;
                r.log10_margin = margin;
                r.sampled = sampled;
                out.records.push_back(std::move(r));
                out.local_min.push_back(is_min);
            }
            if (n == last) {
                break;
            }
            step.advance();
        }
        return out;
    }

private:
    bool below_threshold(std::uint64_t n, const BigInt& rem, const BigInt& q_pow, double lf,
                         std::uint64_t& exact_checks) const
    {
        long double thr_log2 = 0;
        if (cfg_.mode == ThresholdMode::Fixed) {
            if (cfg_.threshold.is_zero()) {
                return false;
            }
            thr_log2 = fixed_log2_;
        } else {
            thr_log2 = log2_epsilon(n);
        }
        if (cfg_.prefilter) {
            // Skip only when frac > 2 * threshold is certain despite the
            // floating-point error in both logarithms.
            const long double scale = static_cast<long double>(mpz_sizeinbase(q_pow.get_mpz_t(), 2)) +
                                      std::fabs(thr_log2) + 1.0L;
            const long double allowance = 1e-9L + scale * 0x1p-40L;
            if (static_cast<long double>(lf) - allowance > thr_log2 + 1.0L) {
                return false;
            }
        }
        ++exact_checks;
        if (cfg_.mode == ThresholdMode::Fixed) {
            return rem * cfg_.threshold.den() < cfg_.threshold.num() * q_pow;
        }
        // rem / q^n < (4^n + 3^n)^2 / 18^n
        BigInt sum = ui_pow(4, n) + ui_pow(3, n);
        return rem * ui_pow(18, n) < sum * sum * q_pow;
    }

    const ScanConfig& cfg_;
    double fixed_log2_ = 0;
};

std::uint64_t fnv1a(const std::string& s)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::map<std::string, std::string> parse_kv_lines(const std::string& text)
{
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq != std::string::npos) {
            kv[line.substr(0, eq)] = line.substr(eq + 1);
        }
    }
    return kv;
}

std::string hexfloat(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

}  // namespace

PowerStepper::PowerStepper(unsigned long p, unsigned long q, std::uint64_t n) : p_(p), q_(q), n_(n)
{
    const RationalPower rp = pow_decompose(BigInt(p), BigInt(q), n);
    int_part_ = rp.int_part;
    rem_ = rp.frac_num;
    q_pow_ = rp.q_pow;
}

void PowerStepper::advance()
{
    // p^n = I q^n + R  =>  p^(n+1) = (pI div q) q^(n+1) + ((pI mod q) q^n + pR)
    mpz_mul_ui(int_part_.get_mpz_t(), int_part_.get_mpz_t(), p_);
    const unsigned long carry = mpz_fdiv_q_ui(int_part_.get_mpz_t(), int_part_.get_mpz_t(), q_);
    mpz_mul_ui(rem_.get_mpz_t(), rem_.get_mpz_t(), p_);
    mpz_addmul_ui(rem_.get_mpz_t(), q_pow_.get_mpz_t(), carry);
    mpz_mul_ui(q_pow_.get_mpz_t(), q_pow_.get_mpz_t(), q_);
    // The new remainder is below (p + q - 1) q^n, so a few subtractions suffice.
    while (rem_ >= q_pow_) {
        rem_ -= q_pow_;
        int_part_ += 1;
    }
    ++n_;
}

void ScanConfig::validate() const
{
    if (q < 2 || p <= q || std::gcd(p, q) != 1) {
        throw DomainError("scan needs coprime p > q >= 2");
    }
    if (n_min < 1 || n_max < n_min) {
        throw DomainError("scan needs 1 <= n_min <= n_max");
    }
    if (chunk_size < 1) {
        throw DomainError("scan chunk size must be positive");
    }
    if (mode == ThresholdMode::Fixed && threshold.sign() < 0) {
        throw DomainError("scan threshold must be non-negative");
    }
}

std::string ScanConfig::canonical() const
{
    std::string s;
    s += "p=" + std::to_string(p) + "\n";
    s += "q=" + std::to_string(q) + "\n";
    s += "n_min=" + std::to_string(n_min) + "\n";
    s += "n_max=" + std::to_string(n_max) + "\n";
    s += "threshold=" + (mode == ThresholdMode::Fixed ? threshold.to_string() : std::string("eps")) + "\n";
    s += "sample_stride=" + std::to_string(sample_stride) + "\n";
    s += "prefilter=" + std::string(prefilter ? "1" : "0") + "\n";
    return s;
}

std::string ScanConfig::hash() const
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(canonical())));
    return buf;
}

std::string ScanRecord::frac_decimal() const
{
    return frac.to_decimal(60, Rounding::TowardZero);
}

std::string ScanRecord::margin_decimal() const
{
    double e = std::floor(log10_margin);
    double mant = std::pow(10.0, log10_margin - e);
    if (mant >= 9.9999999995) {
        mant /= 10.0;
        e += 1.0;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9fe%+lld", mant, static_cast<long long>(e));
    return buf;
}

std::string csv_header()
{
    return "n,frac,below_threshold,mahler_margin";
}

std::string to_csv(const ScanRecord& r)
{
    return std::to_string(r.n) + "," + r.frac_decimal() + "," + (r.below_threshold ? "true" : "false") + "," +
           r.margin_decimal();
}

std::string to_json_line(const ScanRecord& r)
{
    nlohmann::ordered_json j;
    j["n"] = r.n;
    j["frac"] = r.frac_decimal();
    j["below_threshold"] = r.below_threshold;
    j["mahler_margin"] = r.margin_decimal();
    return j.dump();
}

std::string summary_json(const ScanConfig& cfg, const ScanSummary& s)
{
    nlohmann::ordered_json j;
    j["p"] = cfg.p;
    j["q"] = cfg.q;
    j["n_min"] = cfg.n_min;
    j["n_max"] = cfg.n_max;
    j["threshold"] = cfg.mode == ThresholdMode::Fixed ? cfg.threshold.to_string() : std::string("eps(n)");
    j["config_hash"] = s.config_hash;
    j["complete"] = s.complete;
    j["last_n"] = s.last_n;
    j["scanned"] = s.scanned;
    j["exact_checks"] = s.exact_checks;
    j["hits"] = s.hits;
    if (s.argmin_n) {
        j["argmin_n"] = *s.argmin_n;
        j["min_frac"] = s.min_frac.to_decimal(60, Rounding::TowardZero);
    }
    if (s.argmin_margin_n) {
        ScanRecord tmp;
        tmp.log10_margin = s.min_log10_margin;
        j["argmin_margin_n"] = *s.argmin_margin_n;
        j["min_mahler_margin"] = tmp.margin_decimal();
    }
    return j.dump();
}

void write_checkpoint(const std::string& path, const ScanConfig& cfg, const ScanSummary& state)
{
    std::ostringstream out;
    out << "ZFSCAN1\n";
    out << "config_hash=" << cfg.hash() << "\n";
    out << cfg.canonical();
    out << "last_n=" << state.last_n << "\n";
    out << "scanned=" << state.scanned << "\n";
    out << "exact_checks=" << state.exact_checks << "\n";
    out << "hits=";
    for (std::size_t i = 0; i < state.hits.size(); ++i) {
        out << (i ? " " : "") << state.hits[i];
    }
    out << "\n";
    if (state.argmin_n) {
        out << "min_n=" << *state.argmin_n << "\n";
        out << "min_num=" << state.min_frac.num().get_str() << "\n";
        out << "min_den=" << state.min_frac.den().get_str() << "\n";
    }
    if (state.argmin_margin_n) {
        out << "margin_n=" << *state.argmin_margin_n << "\n";
        out << "margin_log10=" << hexfloat(state.min_log10_margin) << "\n";
    }
    out << "end=1\n";

    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        f << out.str();
        f.flush();
        if (!f) {
            throw std::runtime_error("cannot write checkpoint " + tmp);
        }
    }
    std::filesystem::rename(tmp, path);
}

std::optional<ScanSummary> read_checkpoint(const std::string& path, const ScanConfig& cfg)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        return std::nullopt;
    }
    std::stringstream buf;
    buf << f.rdbuf();
    const std::string text = buf.str();
    if (text.empty()) {
        return std::nullopt;
    }
    if (text.rfind("ZFSCAN1\n", 0) != 0) {
        throw ResumeError("corrupt checkpoint " + path + ": bad magic");
    }
    auto kv = parse_kv_lines(text.substr(8));
    if (kv.count("end") == 0) {
        throw ResumeError("corrupt checkpoint " + path + ": truncated");
    }

    if (kv["config_hash"] != cfg.hash()) {
        const auto current = parse_kv_lines(cfg.canonical());
        std::string diff;
        for (const auto& [key, value] : current) {
            const auto it = kv.find(key);
            const std::string stored = it == kv.end() ? "<missing>" : it->second;
            if (stored != value) {
                diff += "\n  " + key + ": checkpoint=" + stored + " current=" + value;
            }
        }
        throw ResumeError("checkpoint " + path + " was written for a different scan config" +
                          (diff.empty() ? std::string(" (hash mismatch)") : diff));
    }

    auto field = [&](const std::string& key) -> const std::string& {
        const auto it = kv.find(key);
        if (it == kv.end()) {
            throw ResumeError("corrupt checkpoint " + path + ": missing " + key);
        }
        return it->second;
    };
    auto number = [&](const std::string& key) -> std::uint64_t {
        try {
            std::size_t used = 0;
            const std::string& v = field(key);
            const auto x = std::stoull(v, &used);
            if (used != v.size()) {
                throw std::invalid_argument(key);
            }
            return x;
        } catch (const std::logic_error&) {
            throw ResumeError("corrupt checkpoint " + path + ": bad " + key);
        }
    };

    ScanSummary s;
    s.config_hash = cfg.hash();
    s.last_n = number("last_n");
    s.scanned = number("scanned");
    s.exact_checks = number("exact_checks");
    {
        std::istringstream hits(field("hits"));
        std::uint64_t h = 0;
        while (hits >> h) {
            s.hits.push_back(h);
        }
        if (!hits.eof()) {
            throw ResumeError("corrupt checkpoint " + path + ": bad hits");
        }
    }
    if (kv.count("min_n")) {
        s.argmin_n = number("min_n");
        try {
            s.min_frac = Rational(parse_bigint(field("min_num")), parse_bigint(field("min_den")));
        } catch (const DomainError&) {
            throw ResumeError("corrupt checkpoint " + path + ": bad minimum");
        }
    }
    if (kv.count("margin_n")) {
        s.argmin_margin_n = number("margin_n");
        char* end = nullptr;
        const std::string& v = field("margin_log10");
        s.min_log10_margin = std::strtod(v.c_str(), &end);
        if (end != v.c_str() + v.size()) {
            throw ResumeError("corrupt checkpoint " + path + ": bad margin");
        }
    }
    if (s.last_n < cfg.n_min - 1 || s.last_n > cfg.n_max) {
        throw ResumeError("corrupt checkpoint " + path + ": last_n out of range");
    }
    s.complete = s.last_n == cfg.n_max;
    return s;
}

ScanSummary scan(const ScanConfig& cfg, const RecordSink& sink, const ScanControl& control)
{
    cfg.validate();

    ScanSummary summary;
    summary.config_hash = cfg.hash();
    summary.last_n = cfg.n_min - 1;
    if (control.resume && !cfg.checkpoint_path.empty()) {
        if (auto state = read_checkpoint(cfg.checkpoint_path, cfg)) {
            summary = std::move(*state);
        }
    }
    if (summary.last_n >= cfg.n_max) {
        summary.complete = true;
        return summary;
    }

    const std::uint64_t start = summary.last_n + 1;
    const std::uint64_t span = cfg.n_max - start + 1;
    const std::uint64_t chunks = (span + cfg.chunk_size - 1) / cfg.chunk_size;
    const unsigned workers = std::max(1U, cfg.workers);
    // Workers may run at most this many chunks ahead of the merge.
    const std::uint64_t window = 4ULL * workers;

    const ChunkScanner scanner(cfg);
    std::mutex mu;
    std::condition_variable cv;
    std::map<std::uint64_t, ChunkResult> finished;
    std::uint64_t next_chunk = 0;
    std::uint64_t merged = 0;
    bool stop = false;
    std::exception_ptr failure;

    auto worker = [&] {
        for (;;) {
            std::uint64_t idx = 0;
            {
                std::unique_lock lock(mu);
                cv.wait(lock, [&] { return stop || failure || next_chunk >= chunks || next_chunk < merged + window; });
                if (stop || failure || next_chunk >= chunks) {
                    return;
                }
                idx = next_chunk++;
            }
            const std::uint64_t first = start + idx * cfg.chunk_size;
            const std::uint64_t last = std::min(cfg.n_max, first + cfg.chunk_size - 1);
            try {
                ChunkResult res = scanner.run(first, last);
                std::lock_guard lock(mu);
                finished.emplace(idx, std::move(res));
            } catch (...) {
                std::lock_guard lock(mu);
                failure = std::current_exception();
            }
            cv.notify_all();
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) {
        pool.emplace_back(worker);
    }

    auto finish = [&] {
        {
            std::lock_guard lock(mu);
            stop = true;
        }
        cv.notify_all();
        for (auto& t : pool) {
            t.join();
        }
    };

    try {
        for (std::uint64_t idx = 0; idx < chunks; ++idx) {
            ChunkResult res;
            {
                std::unique_lock lock(mu);
                cv.wait(lock, [&] { return failure || finished.count(idx) != 0; });
                if (failure) {
                    std::rethrow_exception(failure);
                }
                res = std::move(finished.at(idx));
                finished.erase(idx);
            }

            const std::uint64_t first = start + idx * cfg.chunk_size;
            const std::uint64_t last = std::min(cfg.n_max, first + cfg.chunk_size - 1);
            for (std::size_t i = 0; i < res.records.size(); ++i) {
                ScanRecord& r = res.records[i];
                if (res.local_min[i] && (!summary.argmin_n || r.frac < summary.min_frac)) {
                    summary.argmin_n = r.n;
                    summary.min_frac = r.frac;
                    r.new_minimum = true;
                }
                if (r.below_threshold) {
                    summary.hits.push_back(r.n);
                }
                if ((r.below_threshold || r.sampled || r.new_minimum) && sink) {
                    sink(r);
                }
            }
            if (res.margin_n && (!summary.argmin_margin_n || res.margin < summary.min_log10_margin)) {
                summary.argmin_margin_n = res.margin_n;
                summary.min_log10_margin = res.margin;
            }
            summary.exact_checks += res.exact_checks;
            summary.scanned += last - first + 1;
            summary.last_n = last;
            summary.complete = last == cfg.n_max;

            if (!cfg.checkpoint_path.empty()) {
                write_checkpoint(cfg.checkpoint_path, cfg, summary);
            }
            {
                std::lock_guard lock(mu);
                merged = idx + 1;
            }
            cv.notify_all();
            if (control.stop_after && last >= *control.stop_after) {
                break;
            }
        }
    } catch (...) {
        finish();
        throw;
    }
    finish();
    return summary;
}

}  // namespace zetafrac
