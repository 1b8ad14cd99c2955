#pragma once

#include "miniqt/frontend/ast.hpp"
#include "miniqt/frontend/parser.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace miniqt::frontend {

/// Finds `name` or `name.mqt` in the include directories, first match wins.
std::optional<std::filesystem::path> find_include(const std::string &name,
                                                  const std::vector<std::string> &includePaths);

/// Loads every `#include <Name>` (transitively) from the include path and
/// prepends the model declarations, which are flagged `fromModel`. Each
/// model file is merged at most once. Throws IncludeNotFound.
Program resolve_includes(Program program, const VerifierConfig &config);

struct TypecheckOptions {
    unsigned intWidth = 32;
    unsigned containerCapacity = 10;
    bool strictPositiveInterval = false;
    /// Library mode: no `main` required, every class template is
    /// instantiated at `int`.
    bool library = false;

    static TypecheckOptions from(const VerifierConfig &config);
};

/// Resolves names, monomorphizes class templates (`QList<int>` becomes
/// class `QList_int`), annotates every expression with its SemType and
/// mangles callees (`QList_int::front`). Throws TypeError / UndefinedSymbol.
TypedAst typecheck(const Program &program, const TypecheckOptions &options);

/// Reads, parses, resolves includes and type-checks a file.
TypedAst load_program(const std::string &path, const VerifierConfig &config);

/// Same as load_program for in-memory source.
TypedAst load_source(std::string_view source, const std::string &file, const VerifierConfig &config);

/// Reads a whole file; throws miniqt::Error("IOError") on failure.
std::string read_file(const std::string &path);

} // namespace miniqt::frontend
