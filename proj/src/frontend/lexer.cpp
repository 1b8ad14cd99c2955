#include "miniqt/frontend/lexer.hpp"

#include <array>
#include <cctype>

namespace miniqt::frontend {

std::string to_string(TokenKind kind)
{
    switch (kind) {
    case TokenKind::Identifier:
        return "identifier";
    case TokenKind::IntegerLiteral:
        return "integer literal";
    case TokenKind::StringLiteral:
        return "string literal";
    case TokenKind::Keyword:
        return "keyword";
    case TokenKind::Punctuation:
        return "punctuation";
    case TokenKind::Operator:
        return "operator";
    case TokenKind::Directive:
        return "directive";
    }
    return "token";
}

bool is_keyword(std::string_view word)
{
    static constexpr std::array<std::string_view, 17> kKeywords = {
        "int",   "bool",   "void",   "class", "template", "if",   "else",  "while", "for",
        "return", "assert", "true",  "false", "this",     "const", "public", "private"};
    for (auto kw : kKeywords)
        if (kw == word)
            return true;
    return false;
}

namespace {

class Lexer {
  public:
    Lexer(std::string_view src, const std::string &file) : src_(src), file_(file) {}

    std::vector<Token> run()
    {
        std::vector<Token> out;
        while (skip_trivia(), pos_ < src_.size()) {
            SourceLocation start = here();
            char c = src_[pos_];
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t b = pos_;
                while (pos_ < src_.size() &&
                       (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                    advance();
                std::string word(src_.substr(b, pos_ - b));
                out.push_back({is_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier,
                               std::move(word), start});
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                std::size_t b = pos_;
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                    advance();
                if (pos_ < src_.size() &&
                    (std::isalpha(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                    throw LexError(here(), "invalid suffix on integer literal");
                out.push_back({TokenKind::IntegerLiteral, std::string(src_.substr(b, pos_ - b)),
                               start});
            } else if (c == '"') {
                out.push_back({TokenKind::StringLiteral, lex_string(start), start});
            } else if (c == '#') {
                advance();
                std::size_t b = pos_;
                while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_])))
                    advance();
                std::string word(src_.substr(b, pos_ - b));
                if (word != "include")
                    throw LexError(start, "unsupported preprocessor directive '#" + word + "'");
                out.push_back({TokenKind::Directive, "#include", start});
            } else {
                out.push_back(lex_symbol(start));
            }
        }
        return out;
    }

  private:
    SourceLocation here() const { return {file_, line_, column_}; }

    void advance()
    {
        if (src_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    bool starts_with(std::string_view s) const { return src_.substr(pos_, s.size()) == s; }

    void skip_trivia()
    {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (starts_with("//")) {
                while (pos_ < src_.size() && src_[pos_] != '\n')
                    advance();
            } else if (starts_with("/*")) {
                SourceLocation start = here();
                advance();
                advance();
                while (pos_ < src_.size() && !starts_with("*/"))
                    advance();
                if (pos_ >= src_.size())
                    throw LexError(start, "unterminated block comment");
                advance();
                advance();
            } else {
                return;
            }
        }
    }

    std::string lex_string(const SourceLocation &start)
    {
        std::size_t b = pos_;
        advance();
        while (pos_ < src_.size() && src_[pos_] != '"') {
            if (src_[pos_] == '\n')
                throw LexError(start, "unterminated string literal");
            if (src_[pos_] == '\\' && pos_ + 1 < src_.size())
                advance();
            advance();
        }
        if (pos_ >= src_.size())
            throw LexError(start, "unterminated string literal");
        advance();
        return std::string(src_.substr(b, pos_ - b));
    }

    Token lex_symbol(const SourceLocation &start)
    {
        // No `>>`: it would swallow the closing brackets of nested template
        // arguments.
        static constexpr std::array<std::string_view, 14> kMulti = {
            "->", "++", "--", "+=", "-=", "*=", "/=", "%=", "==", "!=", "<=", ">=", "&&", "||"};
        for (auto op : kMulti) {
            if (starts_with(op)) {
                advance();
                advance();
                return {TokenKind::Operator, std::string(op), start};
            }
        }
        char c = src_[pos_];
        static constexpr std::string_view kPunct = "(){}[];,.:";
        static constexpr std::string_view kOps = "+-*/%<>=!";
        if (kPunct.find(c) != std::string_view::npos) {
            advance();
            return {TokenKind::Punctuation, std::string(1, c), start};
        }
        if (kOps.find(c) != std::string_view::npos) {
            advance();
            return {TokenKind::Operator, std::string(1, c), start};
        }
        std::string shown = std::isprint(static_cast<unsigned char>(c))
                                ? std::string(1, c)
                                : "\\x" + std::to_string(static_cast<unsigned char>(c));
        throw LexError(start, "illegal character '" + shown + "'");
    }

    std::string_view src_;
    std::string file_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

} // namespace

std::vector<Token> tokenize(std::string_view source, const std::string &file)
{
    return Lexer(source, file).run();
}

} // namespace miniqt::frontend
