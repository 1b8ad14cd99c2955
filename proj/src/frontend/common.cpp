#include "miniqt/common.hpp"

namespace miniqt {

std::string to_string(const SourceLocation &loc)
{
    return loc.file + ":" + std::to_string(loc.line) + ":" + std::to_string(loc.column);
}

std::ostream &operator<<(std::ostream &os, const SourceLocation &loc)
{
    return os << to_string(loc);
}

namespace {
std::string join_dirs(const std::vector<std::string> &dirs)
{
    if (dirs.empty())
        return "(empty include path)";
    std::string out;
    for (const auto &d : dirs) {
        if (!out.empty())
            out += ", ";
        out += d;
    }
    return out;
}
} // namespace

IncludeNotFound::IncludeNotFound(std::string name, const std::vector<std::string> &searched)
    : Error("IncludeNotFound",
            "include <" + name + "> not found in " + join_dirs(searched)),
      name_(std::move(name))
{
}

std::string to_string(PropertyClass pc)
{
    switch (pc) {
    case PropertyClass::UserAssertion:
        return "user-assertion";
    case PropertyClass::ModelPrecondition:
        return "model-precondition";
    case PropertyClass::ArrayBounds:
        return "array-bounds";
    case PropertyClass::Unwinding:
        return "unwinding";
    }
    return "unknown";
}

void VerifierConfig::validate() const
{
    if (unwind < 1)
        throw Error("ConfigError", "unwind bound must be at least 1");
    if (containerCapacity < 1)
        throw Error("ConfigError", "container capacity must be at least 1");
    if (intWidth < 2 || intWidth > 63)
        throw Error("ConfigError", "integer width must be between 2 and 63 bits");
    if (timeoutSeconds < 1)
        throw Error("ConfigError", "timeout must be at least 1 second");
    if (memLimitKb && *memLimitKb == 0)
        throw Error("ConfigError", "memory limit must be positive");
}

} // namespace miniqt
