#pragma once

#include "miniqt/harness/verify.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace miniqt::harness {

struct BenchmarkCase {
    std::string path; // resolved against the manifest's directory
    bool expectFailed = false;
    std::optional<std::string> expectedMessage;
    std::string description; // path as written in the manifest
};

/// `<path> <TRUE|FALSE> [expected message substring]` per line; blank lines
/// and `#` comments are skipped. TRUE means the program is expected to
/// verify. Throws miniqt::Error("ManifestError") naming the line.
std::vector<BenchmarkCase> load_manifest(const std::string &path);
std::vector<BenchmarkCase> parse_manifest(const std::string &text, const std::string &baseDir);

enum class Outcome {
    Successful,     // actual verdict matches the expectation
    FalseIncorrect, // expected to verify, tool reports a violation
    FalseCorrect,   // expected a violation, tool reports success
    WrongProperty,  // expected a violation, tool reports a different one
    Failed,         // tool error / crash
    Timeout,
    MemOut,
};

std::string to_string(Outcome o);

/// Pure function of the expectation and the verdict.
Outcome classify(const BenchmarkCase &c, const VerificationResult &r);

struct Counts {
    std::size_t successful = 0;
    std::size_t falseIncorrect = 0;
    std::size_t falseCorrect = 0;
    std::size_t wrongProperty = 0;
    std::size_t failed = 0;
    std::size_t timeout = 0;
    std::size_t memout = 0;

    std::size_t total() const
    {
        return successful + falseIncorrect + falseCorrect + wrongProperty + failed + timeout +
               memout;
    }
    void add(Outcome o);
};

/// A percentage held as hundredths of a percent (9444 is 94.44%).
struct Rate {
    std::int64_t hundredths = 0;
    std::string to_string() const; // "94.44"
};

struct Rates {
    Rate successful, falseIncorrect, falseCorrect, wrongProperty, failed, timeout, memout;
};

class ZeroTotal : public Error {
  public:
    ZeroTotal() : Error("ZeroTotal", "cannot compute rates over zero cases") {}
};

/// 100 * count / total rounded half-up to two decimals, in exact integer
/// arithmetic.
Rate rate_of(std::size_t count, std::size_t total);
Rates compute_rates(const Counts &counts);

struct CaseReport {
    BenchmarkCase benchmark;
    Outcome outcome = Outcome::Failed;
    Verdict verdict = Verdict::ToolError;
    std::string message; // violated property or diagnostic
    double wallTimeSeconds = 0;
    std::uint64_t peakMemoryKb = 0;
};

struct SuiteReport {
    std::vector<CaseReport> cases; // manifest order
    Counts counts;
    Rates rates;
    double totalWallTimeSeconds = 0;
};

/// Verifies every case, up to `jobs` at a time.
SuiteReport run_suite(const std::string &manifestPath, const VerifierConfig &config,
                      unsigned jobs = 1);
SuiteReport run_cases(const std::vector<BenchmarkCase> &cases, const VerifierConfig &config,
                      unsigned jobs = 1);

/// Machine-readable report; keys are emitted in a fixed order.
std::string report_json(const SuiteReport &report);
/// Human-readable table plus the rate summary.
std::string report_text(const SuiteReport &report);

} // namespace miniqt::harness
