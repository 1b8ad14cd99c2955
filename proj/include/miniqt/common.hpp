#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace miniqt {

/// Position of a token or node in a MiniQt source file. Lines and columns
/// are 1-based.
struct SourceLocation {
    std::string file = "<input>";
    int line = 1;
    int column = 1;

    bool operator==(const SourceLocation &) const = default;
};

std::string to_string(const SourceLocation &loc);
std::ostream &operator<<(std::ostream &os, const SourceLocation &loc);

/// Root of all diagnostics raised by the pipeline. `kind()` is a stable
/// short tag used by the CLI and the suite report.
class Error : public std::runtime_error {
  public:
    Error(std::string kind, const std::string &message)
        : std::runtime_error(message), kind_(std::move(kind)) {}
    const std::string &kind() const noexcept { return kind_; }

  private:
    std::string kind_;
};

/// An error tied to a source position.
class LocatedError : public Error {
  public:
    LocatedError(std::string kind, SourceLocation loc, const std::string &message)
        : Error(std::move(kind), to_string(loc) + ": " + message), loc_(std::move(loc)),
          detail_(message) {}
    const SourceLocation &location() const noexcept { return loc_; }
    const std::string &detail() const noexcept { return detail_; }

  private:
    SourceLocation loc_;
    std::string detail_;
};

class LexError : public LocatedError {
  public:
    LexError(SourceLocation loc, const std::string &message)
        : LocatedError("LexError", std::move(loc), message) {}
};

class ParseError : public LocatedError {
  public:
    ParseError(SourceLocation loc, std::string expected, std::string found)
        : LocatedError("ParseError", std::move(loc),
                       "expected " + expected + ", found " + found),
          expected_(std::move(expected)), found_(std::move(found)) {}
    const std::string &expected() const noexcept { return expected_; }
    const std::string &found() const noexcept { return found_; }

  private:
    std::string expected_;
    std::string found_;
};

class TypeError : public LocatedError {
  public:
    TypeError(SourceLocation loc, const std::string &message)
        : LocatedError("TypeError", std::move(loc), message) {}
};

class UndefinedSymbol : public LocatedError {
  public:
    UndefinedSymbol(SourceLocation loc, std::string name)
        : LocatedError("UndefinedSymbol", std::move(loc), "undefined symbol '" + name + "'"),
          name_(std::move(name)) {}
    const std::string &name() const noexcept { return name_; }

  private:
    std::string name_;
};

class IncludeNotFound : public Error {
  public:
    IncludeNotFound(std::string name, const std::vector<std::string> &searched);
    const std::string &name() const noexcept { return name_; }

  private:
    std::string name_;
};

/// Raised when a verification run exceeds its time or memory budget.
class ResourceLimit : public Error {
  public:
    enum class Kind { Timeout, MemOut };
    explicit ResourceLimit(Kind kind)
        : Error(kind == Kind::Timeout ? "Timeout" : "MemOut",
                kind == Kind::Timeout ? "time limit exceeded" : "memory limit exceeded"),
          which_(kind) {}
    Kind which() const noexcept { return which_; }

  private:
    Kind which_;
};

/// Class of a checked property; every ASSERT and claim carries one.
enum class PropertyClass { UserAssertion, ModelPrecondition, ArrayBounds, Unwinding };

std::string to_string(PropertyClass pc);

/// Options shared by every pipeline stage.
struct VerifierConfig {
    unsigned unwind = 10;
    bool unwindingAssertions = true;
    std::vector<std::string> includePaths;
    unsigned containerCapacity = 10;
    unsigned timeoutSeconds = 600;
    std::optional<std::uint64_t> memLimitKb;
    unsigned intWidth = 32;
    bool strictPositiveInterval = false;

    /// Throws miniqt::Error when a field is out of range.
    void validate() const;
};

} // namespace miniqt
