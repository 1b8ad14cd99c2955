#include "miniqt/opmodel/catalog.hpp"

#include "miniqt/frontend/frontend.hpp"

#include <set>
#include <sstream>

namespace fs = std::filesystem;

namespace miniqt::opmodel {

using frontend::Expr;
using frontend::ExprKind;
using frontend::Stmt;
using frontend::StmtKind;

namespace {

std::string trim(const std::string &s)
{
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void catalog_error(int line, const std::string &what)
{
    throw Error("CatalogError", "catalog line " + std::to_string(line) + ": " + what);
}

void collect_messages(const Expr &e, std::set<std::string> &out)
{
    if (e.kind == ExprKind::Call && e.resolved == "__VERIFIER_assert" && e.args.size() == 2)
        out.insert(e.args[1].text);
    for (const auto &a : e.args)
        collect_messages(a, out);
}

void collect_messages(const Stmt &s, std::set<std::string> &out)
{
    for (const auto &e : s.exprs)
        collect_messages(e, out);
    for (const auto &b : s.body)
        collect_messages(b, out);
}

} // namespace

ModelCatalog parse_catalog(const std::string &text, const fs::path &directory)
{
    ModelCatalog cat;
    cat.directory = directory;
    std::istringstream in(text);
    std::string raw;
    int lineNo = 0;
    while (std::getline(in, raw)) {
        ++lineNo;
        std::string line = trim(raw.substr(0, raw.find('#')));
        if (line.empty())
            continue;
        if (line.rfind("require ", 0) == 0) {
            std::string rest = trim(line.substr(8));
            auto sp = rest.find_first_of(" \t");
            if (sp == std::string::npos)
                catalog_error(lineNo, "expected a quoted message after the method name");
            std::string method = rest.substr(0, sp);
            std::string msg = trim(rest.substr(sp));
            if (msg.size() < 2 || msg.front() != '"' || msg.back() != '"')
                catalog_error(lineNo, "message must be double-quoted");
            cat.requiredAssertions[method].push_back(msg.substr(1, msg.size() - 2));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            catalog_error(lineNo, "expected 'Name = file' or 'require ...'");
        std::string name = trim(line.substr(0, eq));
        std::string file = trim(line.substr(eq + 1));
        if (name.empty() || file.empty())
            catalog_error(lineNo, "empty include name or file");
        if (!cat.models.emplace(name, directory / file).second)
            catalog_error(lineNo, "duplicate model '" + name + "'");
    }
    return cat;
}

ModelCatalog load_catalog(const std::string &path)
{
    return parse_catalog(frontend::read_file(path), fs::path(path).parent_path());
}

std::vector<std::string> validate_models(const ModelCatalog &catalog, const VerifierConfig &config)
{
    std::vector<std::string> diags;
    VerifierConfig cfg = config;
    cfg.includePaths.insert(cfg.includePaths.begin(), catalog.directory.string());
    auto opts = frontend::TypecheckOptions::from(cfg);
    opts.library = true;

    std::map<std::string, std::set<std::string>> found; // mangled method -> messages
    for (const auto &[name, path] : catalog.models) {
        try {
            auto program = frontend::parse_source(frontend::read_file(path.string()), path.string());
            for (auto &c : program.classes) {
                c.fromModel = true;
                for (auto &m : c.methods)
                    m.fromModel = true;
            }
            for (auto &f : program.functions)
                f.fromModel = true;
            program = frontend::resolve_includes(std::move(program), cfg);
            auto typed = frontend::typecheck(program, opts);
            for (const auto &c : typed.program.classes)
                for (const auto &m : c.methods)
                    collect_messages(m.body, found[m.mangled]);
        } catch (const Error &e) {
            diags.push_back(e.kind() + " " + name + ": " + e.what());
        }
    }

    for (const auto &[method, messages] : catalog.requiredAssertions) {
        auto it = found.find(method);
        if (it == found.end()) {
            diags.push_back("unknown-method " + method);
            continue;
        }
        for (const auto &msg : messages)
            if (!it->second.count(msg))
                diags.push_back("missing-required-assertion " + method + " \"" + msg + "\"");
    }
    return diags;
}

} // namespace miniqt::opmodel
