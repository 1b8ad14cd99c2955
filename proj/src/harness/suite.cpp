#include "miniqt/harness/suite.hpp"

#include "miniqt/frontend/frontend.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <iomanip>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;

namespace miniqt::harness {

std::string to_string(Outcome o)
{
    switch (o) {
    case Outcome::Successful:
        return "successful";
    case Outcome::FalseIncorrect:
        return "false-incorrect";
    case Outcome::FalseCorrect:
        return "false-correct";
    case Outcome::WrongProperty:
        return "wrong-property";
    case Outcome::Failed:
        return "failed";
    case Outcome::Timeout:
        return "timeout";
    case Outcome::MemOut:
        return "memout";
    }
    return "?";
}

std::vector<BenchmarkCase> parse_manifest(const std::string &text, const std::string &baseDir)
{
    std::vector<BenchmarkCase> cases;
    std::istringstream in(text);
    std::string line;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream fields(line);
        std::string path, expected;
        if (!(fields >> path))
            continue;
        auto fail = [&](const std::string &what) {
            throw Error("ManifestError", "manifest line " + std::to_string(lineNo) + ": " + what);
        };
        if (!(fields >> expected))
            fail("missing expected verdict for '" + path + "'");
        BenchmarkCase c;
        c.description = path;
        c.path = (fs::path(baseDir) / path).string();
        if (expected == "TRUE")
            c.expectFailed = false;
        else if (expected == "FALSE")
            c.expectFailed = true;
        else
            fail("expected TRUE or FALSE, found '" + expected + "'");
        std::string rest;
        std::getline(fields, rest);
        auto b = rest.find_first_not_of(" \t");
        if (b != std::string::npos) {
            auto e = rest.find_last_not_of(" \t\r");
            if (!c.expectFailed)
                fail("a message is only allowed for FALSE cases");
            c.expectedMessage = rest.substr(b, e - b + 1);
        }
        cases.push_back(std::move(c));
    }
    return cases;
}

std::vector<BenchmarkCase> load_manifest(const std::string &path)
{
    std::string text;
    try {
        text = frontend::read_file(path);
    } catch (const Error &e) {
        throw Error("ManifestError", e.what());
    }
    auto cases = parse_manifest(text, fs::path(path).parent_path().string());
    for (const auto &c : cases)
        if (!fs::is_regular_file(c.path))
            throw Error("ManifestError", "benchmark not found: " + c.path);
    return cases;
}

Outcome classify(const BenchmarkCase &c, const VerificationResult &r)
{
    switch (r.verdict) {
    case Verdict::Successful:
        return c.expectFailed ? Outcome::FalseCorrect : Outcome::Successful;
    case Verdict::Failed:
        if (!c.expectFailed)
            return Outcome::FalseIncorrect;
        if (c.expectedMessage &&
            (!r.counterexample ||
             r.counterexample->violated.message.find(*c.expectedMessage) == std::string::npos))
            return Outcome::WrongProperty;
        return Outcome::Successful;
    case Verdict::Timeout:
        return Outcome::Timeout;
    case Verdict::MemOut:
        return Outcome::MemOut;
    case Verdict::ToolError:
    case Verdict::Deferred:
        return Outcome::Failed;
    }
    return Outcome::Failed;
}

void Counts::add(Outcome o)
{
    switch (o) {
    case Outcome::Successful:
        ++successful;
        break;
    case Outcome::FalseIncorrect:
        ++falseIncorrect;
        break;
    case Outcome::FalseCorrect:
        ++falseCorrect;
        break;
    case Outcome::WrongProperty:
        ++wrongProperty;
        break;
    case Outcome::Failed:
        ++failed;
        break;
    case Outcome::Timeout:
        ++timeout;
        break;
    case Outcome::MemOut:
        ++memout;
        break;
    }
}

std::string Rate::to_string() const
{
    std::ostringstream os;
    os << hundredths / 100 << "." << std::setw(2) << std::setfill('0') << hundredths % 100;
    return os.str();
}

Rate rate_of(std::size_t count, std::size_t total)
{
    if (total == 0)
        throw ZeroTotal();
    auto c = static_cast<std::int64_t>(count);
    auto t = static_cast<std::int64_t>(total);
    return Rate{(c * 20000 + t) / (2 * t)};
}

Rates compute_rates(const Counts &counts)
{
    std::size_t t = counts.total();
    return Rates{rate_of(counts.successful, t),    rate_of(counts.falseIncorrect, t),
                 rate_of(counts.falseCorrect, t),  rate_of(counts.wrongProperty, t),
                 rate_of(counts.failed, t),        rate_of(counts.timeout, t),
                 rate_of(counts.memout, t)};
}

SuiteReport run_cases(const std::vector<BenchmarkCase> &cases, const VerifierConfig &config,
                      unsigned jobs)
{
    SuiteReport report;
    report.cases.resize(cases.size());
    auto start = std::chrono::steady_clock::now();
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cases.size(); i = next++) {
            VerificationResult r = verify_file(cases[i].path, config);
            CaseReport &out = report.cases[i];
            out.benchmark = cases[i];
            out.verdict = r.verdict;
            out.outcome = classify(cases[i], r);
            out.message = r.counterexample ? r.counterexample->violated.message : r.errorMessage;
            out.wallTimeSeconds = r.wallTimeSeconds;
            out.peakMemoryKb = r.peakMemoryKb;
        }
    };
    unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(cases.size())));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < n; ++i)
        pool.emplace_back(worker);
    worker();
    for (auto &t : pool)
        t.join();
    for (const auto &c : report.cases)
        report.counts.add(c.outcome);
    if (!cases.empty())
        report.rates = compute_rates(report.counts);
    report.totalWallTimeSeconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

SuiteReport run_suite(const std::string &manifestPath, const VerifierConfig &config,
                      unsigned jobs)
{
    return run_cases(load_manifest(manifestPath), config, jobs);
}

std::string report_json(const SuiteReport &report)
{
    using nlohmann::ordered_json;
    ordered_json j;
    j["total"] = report.cases.size();
    const Counts &c = report.counts;
    j["counts"] = {{"successful", c.successful}, {"falseIncorrect", c.falseIncorrect},
                   {"falseCorrect", c.falseCorrect}, {"wrongProperty", c.wrongProperty},
                   {"failed", c.failed},         {"timeout", c.timeout},
                   {"memout", c.memout}};
    const Rates &r = report.rates;
    j["rates"] = {{"successful", r.successful.to_string()},
                  {"falseIncorrect", r.falseIncorrect.to_string()},
                  {"falseCorrect", r.falseCorrect.to_string()},
                  {"wrongProperty", r.wrongProperty.to_string()},
                  {"failed", r.failed.to_string()},
                  {"timeout", r.timeout.to_string()},
                  {"memout", r.memout.to_string()}};
    j["totalWallTimeSeconds"] = report.totalWallTimeSeconds;
    ordered_json cases = ordered_json::array();
    for (const auto &cr : report.cases) {
        ordered_json e;
        e["path"] = cr.benchmark.description;
        e["expected"] = cr.benchmark.expectFailed ? "FAILED" : "SUCCESSFUL";
        if (cr.benchmark.expectedMessage)
            e["expectedMessage"] = *cr.benchmark.expectedMessage;
        e["actual"] = to_string(cr.verdict);
        e["outcome"] = to_string(cr.outcome);
        e["message"] = cr.message;
        e["timeSeconds"] = cr.wallTimeSeconds;
        e["memoryKb"] = cr.peakMemoryKb;
        cases.push_back(std::move(e));
    }
    j["cases"] = std::move(cases);
    return j.dump(2) + "\n";
}

std::string report_text(const SuiteReport &report)
{
    std::ostringstream os;
    std::size_t width = 4;
    for (const auto &c : report.cases)
        width = std::max(width, c.benchmark.description.size());
    os << std::left << std::setw(static_cast<int>(width)) << "case" << "  " << std::setw(12)
       << "expected" << std::setw(12) << "actual" << std::setw(16) << "outcome"
       << "time(s)\n";
    for (const auto &c : report.cases) {
        os << std::left << std::setw(static_cast<int>(width)) << c.benchmark.description << "  "
           << std::setw(12) << (c.benchmark.expectFailed ? "FAILED" : "SUCCESSFUL")
           << std::setw(12) << to_string(c.verdict) << std::setw(16) << to_string(c.outcome)
           << std::fixed << std::setprecision(2) << c.wallTimeSeconds << "\n";
    }
    const Counts &n = report.counts;
    const Rates &r = report.rates;
    os << "\ntotal cases:      " << n.total() << "\n";
    auto row = [&](const char *label, std::size_t count, const Rate &rate) {
        os << std::left << std::setw(18) << label << std::right << std::setw(3) << count << "  "
           << std::setw(6) << rate.to_string() << "%\n";
    };
    if (n.total() > 0) {
        row("successful:", n.successful, r.successful);
        row("false incorrect:", n.falseIncorrect, r.falseIncorrect);
        row("false correct:", n.falseCorrect, r.falseCorrect);
        row("wrong property:", n.wrongProperty, r.wrongProperty);
        row("failed:", n.failed, r.failed);
        row("timeout:", n.timeout, r.timeout);
        row("memout:", n.memout, r.memout);
    }
    os << "total time:       " << std::fixed << std::setprecision(2)
       << report.totalWallTimeSeconds << " s\n";
    return os.str();
}

} // namespace miniqt::harness
