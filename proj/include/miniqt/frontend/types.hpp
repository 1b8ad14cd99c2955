#pragma once

#include <string>

namespace miniqt {

/// Semantic type of a MiniQt expression or declaration.
///
/// Arrays only occur as class fields and hold scalars (Int or Bool); their
/// capacity is fixed at type-check time. StringLiteral values are opaque and
/// only flow into assertion messages and constructor/method parameters.
struct SemType {
    enum class Kind { Error, Bool, Int, Void, StringLiteral, Class, Array };

    Kind kind = Kind::Error;
    unsigned width = 0;        // Int, and Array of Int
    std::string className;     // Class
    Kind elem = Kind::Error;   // Array element kind
    unsigned capacity = 0;     // Array

    static SemType of(Kind k, unsigned w = 0)
    {
        SemType t;
        t.kind = k;
        t.width = w;
        return t;
    }
    static SemType boolean() { return of(Kind::Bool); }
    static SemType integer(unsigned w) { return of(Kind::Int, w); }
    static SemType void_type() { return of(Kind::Void); }
    static SemType string_literal() { return of(Kind::StringLiteral); }
    static SemType class_type(std::string name)
    {
        SemType t = of(Kind::Class);
        t.className = std::move(name);
        return t;
    }
    static SemType array(SemType element, unsigned cap)
    {
        SemType t = of(Kind::Array, element.width);
        t.elem = element.kind;
        t.capacity = cap;
        return t;
    }

    bool is_bool() const { return kind == Kind::Bool; }
    bool is_int() const { return kind == Kind::Int; }
    bool is_scalar() const { return kind == Kind::Bool || kind == Kind::Int; }
    bool is_class() const { return kind == Kind::Class; }
    bool is_array() const { return kind == Kind::Array; }
    SemType element() const { return elem == Kind::Bool ? boolean() : integer(width); }

    bool operator==(const SemType &) const = default;
};

std::string to_string(const SemType &t);

} // namespace miniqt
