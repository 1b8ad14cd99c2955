#pragma once

#include "miniqt/common.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace miniqt::frontend {

enum class TokenKind {
    Identifier,
    IntegerLiteral,
    StringLiteral,
    Keyword,
    Punctuation,
    Operator,
    Directive, // `#include`
};

std::string to_string(TokenKind kind);

/// A lexeme. Integer literals are unsigned decimal numerals; a leading minus
/// is handled by the parser. String literal text keeps its quotes.
struct Token {
    TokenKind kind;
    std::string text;
    SourceLocation loc;

    bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
};

bool is_keyword(std::string_view word);

/// Splits `source` into tokens, dropping whitespace and both comment styles.
/// Throws LexError on an illegal character or unterminated literal/comment.
std::vector<Token> tokenize(std::string_view source, const std::string &file);

} // namespace miniqt::frontend
