#include "miniqt/frontend/frontend.hpp"

#include <deque>
#include <map>
#include <set>

namespace miniqt::frontend {

TypecheckOptions TypecheckOptions::from(const VerifierConfig &config)
{
    TypecheckOptions o;
    o.intWidth = config.intWidth;
    o.containerCapacity = config.containerCapacity;
    o.strictPositiveInterval = config.strictPositiveInterval;
    return o;
}

namespace {

constexpr const char *kCapacityConstant = "__CONTAINER_CAPACITY";
constexpr const char *kStrictIntervalConstant = "__STRICT_POSITIVE_INTERVAL";

// ---- template substitution --------------------------------------------------

void substitute(TypeName &t, const std::string &param, const TypeName &arg)
{
    if (t.name == param && t.args.empty()) {
        SourceLocation loc = t.loc;
        t = arg;
        t.loc = loc;
        return;
    }
    for (auto &a : t.args)
        substitute(a, param, arg);
}

void substitute(Stmt &s, const std::string &param, const TypeName &arg)
{
    if (s.kind == StmtKind::VarDecl)
        substitute(s.declType, param, arg);
    for (auto &c : s.body)
        substitute(c, param, arg);
}

struct Binding {
    std::string unique;
    SemType type;
};

struct ClassInfo {
    ClassDecl *decl = nullptr;
    std::map<std::string, SemType> fields;
};

class Checker {
  public:
    Checker(const Program &program, const TypecheckOptions &options)
        : opts_(options)
    {
        for (const auto &c : program.classes) {
            if (templates_.count(c.name) || concrete_names_.count(c.name))
                throw TypeError(c.loc, "class '" + c.name + "' declared more than once");
            if (c.templateParam)
                templates_.emplace(c.name, c);
            else {
                concrete_names_.insert(c.name);
                pending_concrete_.push_back(c);
            }
        }
        for (const auto &f : program.functions) {
            if (functions_.count(f.name))
                throw TypeError(f.loc, "function '" + f.name + "' declared more than once");
            functions_.emplace(f.name, f);
        }
    }

    TypedAst run()
    {
        // Register non-template classes first so their names resolve.
        for (auto &c : pending_concrete_)
            register_class(std::move(c));
        pending_concrete_.clear();

        if (opts_.library) {
            for (auto &[name, tmpl] : templates_)
                instantiate(name, TypeName{"int", {}, tmpl.loc}, tmpl.loc);
        } else {
            auto it = functions_.find("main");
            if (it == functions_.end())
                throw UndefinedSymbol(SourceLocation{}, "main");
            if (!it->second.params.empty())
                throw TypeError(it->second.loc, "'main' must take no parameters");
        }

        // Signatures before bodies so that calls may refer forward.
        for (auto &[name, f] : functions_)
            resolve_signature(f, nullptr);

        TypedAst out;
        out.intWidth = opts_.intWidth;
        for (auto &[name, f] : functions_) {
            check_body(f, nullptr);
            out.program.functions.push_back(f);
        }
        // Instantiations discovered while checking bodies are appended to
        // the queue; drain it until stable.
        while (!body_queue_.empty()) {
            std::string cname = body_queue_.front();
            body_queue_.pop_front();
            ClassInfo &info = classes_.at(cname);
            for (auto &m : info.decl->methods)
                check_body(m, &info);
        }
        for (const auto &name : class_order_)
            out.program.classes.push_back(*classes_.at(name).decl);
        return out;
    }

  private:
    // ---- types -------------------------------------------------------------

    SemType int_type() const { return SemType::integer(opts_.intWidth); }

    SemType resolve_type(const TypeName &t)
    {
        if (t.name == "int" || t.name == "bool" || t.name == "void" || t.name == "string") {
            if (!t.args.empty())
                throw TypeError(t.loc, "type '" + t.name + "' takes no template arguments");
            if (t.name == "int")
                return int_type();
            if (t.name == "bool")
                return SemType::boolean();
            if (t.name == "void")
                return SemType::void_type();
            return SemType::string_literal();
        }
        if (auto it = templates_.find(t.name); it != templates_.end()) {
            if (t.args.size() != 1)
                throw TypeError(t.loc, "class template '" + t.name + "' requires one type argument");
            return SemType::class_type(instantiate(t.name, t.args[0], t.loc));
        }
        if (classes_.count(t.name)) {
            if (!t.args.empty())
                throw TypeError(t.loc, "class '" + t.name + "' is not a template");
            return SemType::class_type(t.name);
        }
        throw UndefinedSymbol(t.loc, t.name);
    }

    std::string instantiate(const std::string &tmplName, const TypeName &arg,
                            const SourceLocation &loc)
    {
        SemType argType = resolve_type(arg);
        if (!argType.is_scalar())
            throw TypeError(loc, "template '" + tmplName +
                                     "' can only be instantiated with int or bool");
        std::string instName = tmplName + "_" + arg.name;
        if (classes_.count(instName))
            return instName;
        ClassDecl inst = templates_.at(tmplName);
        std::string param = *inst.templateParam;
        inst.templateParam.reset();
        inst.name = instName;
        TypeName self{tmplName, {arg}, loc};
        for (auto &f : inst.fields)
            substitute(f.type, param, arg);
        for (auto &m : inst.methods) {
            substitute(m.returnType, param, arg);
            for (auto &p : m.params)
                substitute(p.type, param, arg);
            substitute(m.body, param, arg);
            if (m.isConstructor)
                m.name = instName;
        }
        register_class(std::move(inst), tmplName);
        return instName;
    }

    void register_class(ClassDecl decl, const std::string &sourceName = "")
    {
        std::string name = decl.name;
        auto owned = std::make_unique<ClassDecl>(std::move(decl));
        ClassInfo &info = classes_[name];
        info.decl = owned.get();
        owned_.push_back(std::move(owned));
        class_order_.push_back(name);
        source_name_[name] = sourceName.empty() ? name : sourceName;

        for (auto &f : info.decl->fields) {
            if (info.fields.count(f.name))
                throw TypeError(f.loc, "field '" + f.name + "' declared more than once");
            SemType t = resolve_type(f.type);
            if (!t.is_scalar())
                throw TypeError(f.loc, "field '" + f.name + "' must have type int or bool");
            if (f.arraySize) {
                std::int64_t cap = 0;
                if (f.arraySize->literal)
                    cap = *f.arraySize->literal;
                else if (f.arraySize->constant == kCapacityConstant)
                    cap = opts_.containerCapacity;
                else
                    throw UndefinedSymbol(f.loc, f.arraySize->constant);
                if (cap < 1)
                    throw TypeError(f.loc, "array capacity must be at least 1");
                check_literal_fits(cap, f.loc);
                t = SemType::array(t, static_cast<unsigned>(cap));
            }
            f.semType = t;
            info.fields[f.name] = t;
        }

        std::map<std::string, std::map<std::size_t, int>> arities;
        for (auto &m : info.decl->methods) {
            if (m.isConstructor && m.name != source_name_[name] && m.name != name)
                throw TypeError(m.loc, "constructor name does not match class");
            if (++arities[m.name][m.params.size()] > 1)
                throw TypeError(m.loc, "method '" + m.name + "' with " +
                                           std::to_string(m.params.size()) +
                                           " parameter(s) declared more than once");
        }
        for (auto &m : info.decl->methods) {
            std::string base = m.isConstructor ? name : m.name;
            m.mangled = name + "::" + base;
            if (arities[m.name].size() > 1)
                m.mangled += "/" + std::to_string(m.params.size());
            m.fromModel = m.fromModel || info.decl->fromModel;
            resolve_signature(m, &info);
        }
        body_queue_.push_back(name);
    }

    void resolve_signature(FuncDecl &f, const ClassInfo *owner)
    {
        if (!owner)
            f.mangled = f.name;
        f.returnSemType = f.isConstructor ? SemType::void_type() : resolve_type(f.returnType);
        if (!f.returnSemType.is_scalar() && f.returnSemType.kind != SemType::Kind::Void)
            throw TypeError(f.loc, "functions may only return int, bool or void");
        std::set<std::string> seen;
        for (auto &p : f.params) {
            p.semType = resolve_type(p.type);
            if (!p.semType.is_scalar() && p.semType.kind != SemType::Kind::StringLiteral)
                throw TypeError(p.loc, "parameter '" + p.name + "' must be int, bool or string");
            if (!seen.insert(p.name).second)
                throw TypeError(p.loc, "parameter '" + p.name + "' declared more than once");
        }
        if (f.name == "main" && !owner && !f.returnSemType.is_int() &&
            f.returnSemType.kind != SemType::Kind::Void)
            throw TypeError(f.loc, "'main' must return int or void");
    }

    void check_literal_fits(std::int64_t v, const SourceLocation &loc) const
    {
        const std::int64_t hi = (std::int64_t{1} << (opts_.intWidth - 1)) - 1;
        const std::int64_t lo = -hi - 1;
        if (v < lo || v > hi)
            throw TypeError(loc, "integer literal " + std::to_string(v) + " does not fit in " +
                                     std::to_string(opts_.intWidth) + " bits");
    }

    // ---- bodies ------------------------------------------------------------

    void check_body(FuncDecl &f, ClassInfo *owner)
    {
        fn_ = &f;
        owner_ = owner;
        scopes_.clear();
        used_names_.clear();
        scopes_.emplace_back();
        for (auto &p : f.params)
            declare(p.name, p.semType, p.loc);
        check_stmt(f.body);
        scopes_.clear();
        fn_ = nullptr;
        owner_ = nullptr;
    }

    std::string declare(const std::string &name, const SemType &type, const SourceLocation &loc)
    {
        auto &scope = scopes_.back();
        if (scope.count(name))
            throw TypeError(loc, "'" + name + "' declared more than once in the same scope");
        std::string unique = name;
        if (int n = used_names_[name]++; n > 0)
            unique = name + "$" + std::to_string(n);
        scope[name] = Binding{unique, type};
        return unique;
    }

    const Binding *lookup(const std::string &name) const
    {
        for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it)
            if (auto f = it->find(name); f != it->end())
                return &f->second;
        return nullptr;
    }

    void check_stmt(Stmt &s)
    {
        switch (s.kind) {
        case StmtKind::Empty:
            return;
        case StmtKind::Block:
            scopes_.emplace_back();
            for (auto &c : s.body)
                check_stmt(c);
            scopes_.pop_back();
            return;
        case StmtKind::VarDecl:
            check_var_decl(s);
            return;
        case StmtKind::Assign:
            check_assign(s);
            return;
        case StmtKind::If:
            condition(s.exprs[0]);
            for (auto &c : s.body) {
                scopes_.emplace_back();
                check_stmt(c);
                scopes_.pop_back();
            }
            return;
        case StmtKind::While:
            condition(s.exprs[0]);
            scopes_.emplace_back();
            check_stmt(s.body[0]);
            scopes_.pop_back();
            return;
        case StmtKind::For:
            scopes_.emplace_back();
            check_stmt(s.body[0]);
            if (!s.exprs.empty())
                condition(s.exprs[0]);
            check_stmt(s.body[1]);
            scopes_.emplace_back();
            check_stmt(s.body[2]);
            scopes_.pop_back();
            scopes_.pop_back();
            return;
        case StmtKind::ExprStmt: {
            SemType t = check(s.exprs[0]);
            if (t.is_class() || t.is_array())
                throw TypeError(s.loc, "expression statement has no effect");
            return;
        }
        case StmtKind::Assert:
            condition(s.exprs[0]);
            return;
        case StmtKind::Return: {
            const SemType &rt = fn_->returnSemType;
            if (s.exprs.empty()) {
                if (rt.kind != SemType::Kind::Void)
                    throw TypeError(s.loc, "non-void function must return a value");
                return;
            }
            if (rt.kind == SemType::Kind::Void)
                throw TypeError(s.loc, "void function cannot return a value");
            expect_type(s.exprs[0], rt, "return value");
            return;
        }
        }
    }

    void check_var_decl(Stmt &s)
    {
        SemType t = resolve_type(s.declType);
        s.type = t;
        if (t.is_class()) {
            if (!s.ctorArgs && !s.exprs.empty())
                throw TypeError(s.loc, "objects cannot be copy-initialized");
            ClassInfo &info = classes_.at(t.className);
            std::vector<SemType> argTypes;
            for (auto &a : s.exprs)
                argTypes.push_back(check_value(a));
            bool hasCtor = false;
            const FuncDecl *match = nullptr;
            for (const auto &m : info.decl->methods) {
                if (!m.isConstructor)
                    continue;
                hasCtor = true;
                if (m.params.size() == argTypes.size())
                    match = &m;
            }
            if (!match && (hasCtor || !argTypes.empty()))
                throw TypeError(s.loc, "no constructor of '" + t.className + "' takes " +
                                           std::to_string(argTypes.size()) + " argument(s)");
            if (match) {
                check_args(*match, s.exprs, 0, s.loc);
                s.text = match->mangled;
            }
        } else if (t.is_scalar()) {
            if (s.ctorArgs)
                throw TypeError(s.loc, "scalar variables use '=' initialization");
            if (!s.exprs.empty())
                expect_type(s.exprs[0], t, "initializer");
        } else {
            throw TypeError(s.loc, "variables must have type int, bool or a class type");
        }
        s.resolved = declare(s.name, t, s.loc);
    }

    void check_assign(Stmt &s)
    {
        Expr &lhs = s.exprs[0];
        SemType lt = check(lhs);
        bool lvalue = lhs.kind == ExprKind::Name || lhs.kind == ExprKind::Index ||
                      lhs.kind == ExprKind::Member;
        if (!lvalue || !lt.is_scalar())
            throw TypeError(s.loc, "left-hand side is not an assignable scalar");
        if (s.text == "=") {
            expect_type(s.exprs[1], lt, "assigned value");
            return;
        }
        if (!lt.is_int())
            throw TypeError(s.loc, "'" + s.text + "' requires an int operand");
        if (s.exprs.size() > 1)
            expect_type(s.exprs[1], lt, "assigned value");
    }

    void check_args(const FuncDecl &callee, std::vector<Expr> &args, std::size_t first,
                    const SourceLocation &loc)
    {
        if (args.size() - first != callee.params.size())
            throw TypeError(loc, "'" + callee.name + "' expects " +
                                     std::to_string(callee.params.size()) + " argument(s)");
        for (std::size_t i = 0; i < callee.params.size(); ++i)
            expect_type(args[first + i], callee.params[i].semType,
                        "argument " + std::to_string(i + 1) + " of '" + callee.name + "'");
    }

    void expect_type(Expr &e, const SemType &want, const std::string &what)
    {
        SemType got = check(e);
        if (!(got == want))
            throw TypeError(e.loc, what + " has type " + to_string(got) + ", expected " +
                                       to_string(want));
    }

    SemType check_value(Expr &e)
    {
        SemType t = check(e);
        if (!t.is_scalar() && t.kind != SemType::Kind::StringLiteral)
            throw TypeError(e.loc, "expected a value, found " + to_string(t));
        return t;
    }

    /// Condition context: Int converts to Bool via `!= 0`.
    void condition(Expr &e)
    {
        SemType t = check(e);
        if (t.is_bool())
            return;
        if (!t.is_int())
            throw TypeError(e.loc, "condition has type " + to_string(t) + ", expected bool");
        SourceLocation loc = e.loc;
        Expr zero = Expr::int_lit(0, loc);
        zero.type = t;
        Expr cmp = Expr::binary("!=", std::move(e), std::move(zero), loc);
        cmp.type = SemType::boolean();
        e = std::move(cmp);
    }

    SemType check(Expr &e)
    {
        e.type = check_impl(e);
        return e.type;
    }

    SemType check_impl(Expr &e)
    {
        switch (e.kind) {
        case ExprKind::IntLit:
            check_literal_fits(e.value, e.loc);
            return int_type();
        case ExprKind::BoolLit:
            return SemType::boolean();
        case ExprKind::StringLit:
            return SemType::string_literal();
        case ExprKind::This:
            if (!owner_)
                throw TypeError(e.loc, "'this' used outside of a method");
            return SemType::class_type(owner_->decl->name);
        case ExprKind::Name:
            return check_name(e);
        case ExprKind::Member: {
            SemType obj = check(e.args[0]);
            if (!obj.is_class())
                throw TypeError(e.loc, "member access on non-object of type " + to_string(obj));
            const ClassInfo &info = classes_.at(obj.className);
            auto it = info.fields.find(e.text);
            if (it == info.fields.end())
                throw UndefinedSymbol(e.loc, obj.className + "::" + e.text);
            return it->second;
        }
        case ExprKind::Index: {
            SemType arr = check(e.args[0]);
            if (!arr.is_array())
                throw TypeError(e.loc, "subscript of non-array of type " + to_string(arr));
            expect_type(e.args[1], int_type(), "array index");
            return arr.element();
        }
        case ExprKind::Unary:
            if (e.text == "!") {
                condition(e.args[0]);
                return SemType::boolean();
            }
            expect_type(e.args[0], int_type(), "operand of unary '-'");
            return int_type();
        case ExprKind::Binary:
            return check_binary(e);
        case ExprKind::Call:
            return check_call(e);
        case ExprKind::MethodCall:
            return check_method_call(e);
        }
        throw TypeError(e.loc, "unknown expression");
    }

    SemType check_name(Expr &e)
    {
        if (const Binding *b = lookup(e.text)) {
            e.resolved = b->unique;
            return b->type;
        }
        if (owner_ && owner_->fields.count(e.text)) {
            // Bare field access means `this->field`.
            SourceLocation loc = e.loc;
            std::string field = e.text;
            Expr self;
            self.kind = ExprKind::This;
            self.loc = loc;
            Expr member;
            member.kind = ExprKind::Member;
            member.loc = loc;
            member.text = field;
            member.arrow = true;
            member.args.push_back(std::move(self));
            e = std::move(member);
            return check_impl(e);
        }
        if (e.text == kCapacityConstant) {
            e = Expr::int_lit(opts_.containerCapacity, e.loc);
            return check_impl(e);
        }
        if (e.text == kStrictIntervalConstant) {
            e = Expr::bool_lit(opts_.strictPositiveInterval, e.loc);
            return SemType::boolean();
        }
        throw UndefinedSymbol(e.loc, e.text);
    }

    SemType check_binary(Expr &e)
    {
        const std::string &op = e.text;
        if (op == "&&" || op == "||") {
            condition(e.args[0]);
            condition(e.args[1]);
            return SemType::boolean();
        }
        SemType l = check(e.args[0]);
        SemType r = check(e.args[1]);
        if (op == "==" || op == "!=") {
            if (!l.is_scalar() || !(l == r))
                throw TypeError(e.loc, "cannot compare " + to_string(l) + " with " + to_string(r));
            return SemType::boolean();
        }
        if (!l.is_int() || !r.is_int())
            throw TypeError(e.loc, "operator '" + op + "' requires int operands, found " +
                                       to_string(l) + " and " + to_string(r));
        if (op == "<" || op == "<=" || op == ">" || op == ">=")
            return SemType::boolean();
        return int_type();
    }

    SemType check_call(Expr &e)
    {
        const std::string &name = e.text;
        if (name == "nondet_int") {
            if (!e.args.empty())
                throw TypeError(e.loc, "nondet_int takes no arguments");
            e.resolved = name;
            return int_type();
        }
        if (name == "__VERIFIER_assert") {
            if (e.args.size() != 2)
                throw TypeError(e.loc, "__VERIFIER_assert expects (condition, message)");
            expect_type(e.args[0], SemType::boolean(), "assertion condition");
            if (e.args[1].kind != ExprKind::StringLit)
                throw TypeError(e.args[1].loc, "assertion message must be a string literal");
            check(e.args[1]);
            e.resolved = name;
            return SemType::void_type();
        }
        if (name == "__VERIFIER_assume") {
            if (e.args.size() != 1)
                throw TypeError(e.loc, "__VERIFIER_assume expects one condition");
            condition(e.args[0]);
            e.resolved = name;
            return SemType::void_type();
        }
        if (owner_) {
            for (const auto &m : owner_->decl->methods) {
                if (!m.isConstructor && m.name == name) {
                    // Bare method call means `this->method(...)`.
                    Expr self;
                    self.kind = ExprKind::This;
                    self.loc = e.loc;
                    e.kind = ExprKind::MethodCall;
                    e.arrow = true;
                    e.args.insert(e.args.begin(), std::move(self));
                    return check_method_call(e);
                }
            }
        }
        auto it = functions_.find(name);
        if (it == functions_.end())
            throw UndefinedSymbol(e.loc, name);
        const FuncDecl &callee = it->second;
        check_args(callee, e.args, 0, e.loc);
        e.resolved = callee.mangled;
        return callee.returnSemType;
    }

    SemType check_method_call(Expr &e)
    {
        SemType recv = check(e.args[0]);
        if (!recv.is_class())
            throw TypeError(e.loc, "method call on non-object of type " + to_string(recv));
        if (e.args[0].kind != ExprKind::Name && e.args[0].kind != ExprKind::This)
            throw TypeError(e.loc, "method receiver must be a named object");
        const ClassInfo &info = classes_.at(recv.className);
        const FuncDecl *match = nullptr;
        bool known = false;
        for (const auto &m : info.decl->methods) {
            if (m.isConstructor || m.name != e.text)
                continue;
            known = true;
            if (m.params.size() == e.args.size() - 1)
                match = &m;
        }
        if (!known)
            throw UndefinedSymbol(e.loc, recv.className + "::" + e.text);
        if (!match)
            throw TypeError(e.loc, "no overload of '" + recv.className + "::" + e.text +
                                       "' takes " + std::to_string(e.args.size() - 1) +
                                       " argument(s)");
        check_args(*match, e.args, 1, e.loc);
        e.resolved = match->mangled;
        return match->returnSemType;
    }

    TypecheckOptions opts_;
    std::map<std::string, ClassDecl> templates_;
    std::set<std::string> concrete_names_;
    std::vector<ClassDecl> pending_concrete_;
    std::map<std::string, FuncDecl> functions_;

    std::map<std::string, ClassInfo> classes_;
    std::vector<std::unique_ptr<ClassDecl>> owned_;
    std::vector<std::string> class_order_;
    std::map<std::string, std::string> source_name_;
    std::deque<std::string> body_queue_;

    FuncDecl *fn_ = nullptr;
    ClassInfo *owner_ = nullptr;
    std::vector<std::map<std::string, Binding>> scopes_;
    std::map<std::string, int> used_names_;
};

} // namespace

TypedAst typecheck(const Program &program, const TypecheckOptions &options)
{
    return Checker(program, options).run();
}

} // namespace miniqt::frontend
