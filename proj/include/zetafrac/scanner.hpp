#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "zetafrac/bigratio.hpp"

namespace zetafrac {

enum class ThresholdMode {
    Fixed,             // frac < threshold
    EpsilonAdaptive,   // frac < eps(n) = (4^n + 3^n)^2 / 18^n
};

struct ScanConfig {
    unsigned long p = 4;
    unsigned long q = 3;
    std::uint64_t n_min = 1;
    std::uint64_t n_max = 1000;
    ThresholdMode mode = ThresholdMode::EpsilonAdaptive;
    Rational threshold = Rational(BigInt(1), BigInt(1000000000));
    std::uint64_t chunk_size = 1000;
    std::uint64_t sample_stride = 1000;  // 0 disables sampled records
    bool prefilter = true;
    unsigned workers = 1;  // not part of the config identity
    std::string checkpoint_path;  // empty: no checkpointing

    void validate() const;
    // key=value lines covering every field that affects the output.
    std::string canonical() const;
    std::string hash() const;  // 16 hex digits of FNV-1a over canonical()
};

struct ScanRecord {
    std::uint64_t n = 0;
    Rational frac;             // exact {(p/q)^n}
    bool below_threshold = false;
    double log10_margin = 0;   // log10({(p/q)^n} * (10/9)^n)
    bool sampled = false;
    bool new_minimum = false;

    std::string frac_decimal() const;    // 60 significant digits, truncated
    std::string margin_decimal() const;  // scientific notation
};

struct ScanSummary {
    std::string config_hash;
    std::uint64_t scanned = 0;
    std::uint64_t exact_checks = 0;  // n that fell through the float pre-filter
    std::vector<std::uint64_t> hits;
    std::optional<std::uint64_t> argmin_n;
    Rational min_frac;
    std::optional<std::uint64_t> argmin_margin_n;
    double min_log10_margin = 0;
    std::uint64_t last_n = 0;  // last n merged (== n_max when complete)
    bool complete = false;
};

class ResumeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using RecordSink = std::function<void(const ScanRecord&)>;

struct ScanControl {
    // Stop (as if interrupted) once every n <= stop_after has been merged.
    std::optional<std::uint64_t> stop_after;
    // Continue from the checkpoint at cfg.checkpoint_path if it exists.
    bool resume = false;
};

// Exact scan of {(p/q)^n} for n_min <= n <= n_max. Records are delivered in
// ascending n: every hit, every n divisible by sample_stride, and every n
// that lowers the running minimum of the fractional part. The output is a
// pure function of the config regardless of worker count or chunking.
ScanSummary scan(const ScanConfig& cfg, const RecordSink& sink, const ScanControl& control = {});

// Checkpoint round trip (format "ZFSCAN1").
void write_checkpoint(const std::string& path, const ScanConfig& cfg, const ScanSummary& state);
// Empty or missing file yields nullopt; corruption or config mismatch throws ResumeError.
std::optional<ScanSummary> read_checkpoint(const std::string& path, const ScanConfig& cfg);

std::string csv_header();
std::string to_csv(const ScanRecord& r);
std::string to_json_line(const ScanRecord& r);
std::string summary_json(const ScanConfig& cfg, const ScanSummary& s);

// Incremental state of (p/q)^n = int_part + rem / q^n, advanced one n at a
// time with only single-limb multiplications and one comparison.
class PowerStepper {
public:
    PowerStepper(unsigned long p, unsigned long q, std::uint64_t n);

    std::uint64_t n() const { return n_; }
    const BigInt& remainder() const { return rem_; }
    const BigInt& q_pow() const { return q_pow_; }
    const BigInt& int_part() const { return int_part_; }
    void advance();

private:
    unsigned long p_;
    unsigned long q_;
    std::uint64_t n_;
    BigInt int_part_;
    BigInt rem_;
    BigInt q_pow_;
};

}  // namespace zetafrac
