#include "miniqt/frontend/frontend.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace fs = std::filesystem;

namespace miniqt::frontend {

std::string read_file(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("IOError", "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::optional<fs::path> find_include(const std::string &name,
                                     const std::vector<std::string> &includePaths)
{
    for (const auto &dir : includePaths) {
        for (const auto &candidate : {fs::path(dir) / name, fs::path(dir) / (name + ".mqt")}) {
            std::error_code ec;
            if (fs::is_regular_file(candidate, ec))
                return candidate;
        }
    }
    return std::nullopt;
}

namespace {

struct IncludeMerger {
    const VerifierConfig &config;
    std::set<std::string> loaded;     // canonical paths
    std::vector<ClassDecl> classes;   // in dependency order
    std::vector<FuncDecl> functions;

    void load_all(const std::vector<IncludeDirective> &includes)
    {
        for (const auto &inc : includes) {
            auto path = find_include(inc.name, config.includePaths);
            if (!path)
                throw IncludeNotFound(inc.name, config.includePaths);
            std::error_code ec;
            fs::path canon = fs::weakly_canonical(*path, ec);
            std::string key = ec ? path->string() : canon.string();
            if (!loaded.insert(key).second)
                continue;
            Program model = parse_source(read_file(path->string()), path->string());
            load_all(model.includes);
            for (auto &c : model.classes) {
                c.fromModel = true;
                for (auto &m : c.methods)
                    m.fromModel = true;
                classes.push_back(std::move(c));
            }
            for (auto &f : model.functions) {
                f.fromModel = true;
                functions.push_back(std::move(f));
            }
        }
    }
};

} // namespace

Program resolve_includes(Program program, const VerifierConfig &config)
{
    IncludeMerger merger{config, {}, {}, {}};
    merger.load_all(program.includes);
    if (merger.classes.empty() && merger.functions.empty())
        return program;
    program.classes.insert(program.classes.begin(),
                           std::make_move_iterator(merger.classes.begin()),
                           std::make_move_iterator(merger.classes.end()));
    program.functions.insert(program.functions.begin(),
                             std::make_move_iterator(merger.functions.begin()),
                             std::make_move_iterator(merger.functions.end()));
    return program;
}

TypedAst load_source(std::string_view source, const std::string &file, const VerifierConfig &config)
{
    Program p = resolve_includes(parse_source(source, file), config);
    return typecheck(p, TypecheckOptions::from(config));
}

TypedAst load_program(const std::string &path, const VerifierConfig &config)
{
    return load_source(read_file(path), path, config);
}

} // namespace miniqt::frontend
