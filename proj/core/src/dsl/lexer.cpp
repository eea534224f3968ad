#include "hybridsim/dsl/lexer.hpp"

#include <cctype>
#include <charconv>

namespace hybridsim::dsl {

namespace {

bool is_identifier_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_identifier_part(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

/// Multi-character symbols, longest first so prefixes never shadow them.
constexpr const char* kWideSymbols[] = {"->", "<=", ">=", "==", "!="};

constexpr char kNarrowSymbols[] = "{}();,:=.<>+-*/";

}  // namespace

std::vector<Token> tokenize(const std::string& text, const std::string& file) {
    std::vector<Token> tokens;
    std::size_t line = 1;
    std::size_t column = 1;
    std::size_t i = 0;

    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (text[i + k] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        i += n;
    };

    while (i < text.size()) {
        char c = text[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        if (c == '#') {
            while (i < text.size() && text[i] != '\n')
                advance(1);
            continue;
        }

        Token token;
        token.line = line;
        token.column = column;

        if (is_identifier_start(c)) {
            std::size_t start = i;
            while (i < text.size() && is_identifier_part(text[i]))
                advance(1);
            token.kind = TokenKind::Identifier;
            token.text = text.substr(start, i - start);
            tokens.push_back(std::move(token));
            continue;
        }

        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = i;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
                advance(1);
            if (i + 1 < text.size() && text[i] == '.'
                && std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
                advance(1);
                while (i < text.size()
                       && std::isdigit(static_cast<unsigned char>(text[i])))
                    advance(1);
            }
            if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
                std::size_t mark = i;
                std::size_t probe = i + 1;
                if (probe < text.size() && (text[probe] == '+' || text[probe] == '-'))
                    ++probe;
                if (probe < text.size()
                    && std::isdigit(static_cast<unsigned char>(text[probe]))) {
                    advance(probe - mark);
                    while (i < text.size()
                           && std::isdigit(static_cast<unsigned char>(text[i])))
                        advance(1);
                }
            }
            token.kind = TokenKind::Number;
            token.text = text.substr(start, i - start);
            const char* first = token.text.data();
            const char* last = first + token.text.size();
            auto [ptr, ec] = std::from_chars(first, last, token.number_value);
            if (ec != std::errc{} || ptr != last)
                throw ParseError(file, token.line, token.column,
                                 "malformed number '" + token.text + "'");
            tokens.push_back(std::move(token));
            continue;
        }

        if (c == '"') {
            std::size_t start = i;
            advance(1);
            while (i < text.size() && text[i] != '"' && text[i] != '\n')
                advance(1);
            if (i >= text.size() || text[i] != '"')
                throw ParseError(file, token.line, token.column,
                                 "unterminated string");
            advance(1);
            token.kind = TokenKind::String;
            token.text = text.substr(start + 1, i - start - 2);
            tokens.push_back(std::move(token));
            continue;
        }

        bool matched = false;
        for (const char* wide : kWideSymbols) {
            std::size_t len = 2;
            if (text.compare(i, len, wide) == 0) {
                token.kind = TokenKind::Symbol;
                token.text = wide;
                advance(len);
                tokens.push_back(std::move(token));
                matched = true;
                break;
            }
        }
        if (matched)
            continue;

        if (std::string_view(kNarrowSymbols).find(c) != std::string_view::npos) {
            token.kind = TokenKind::Symbol;
            token.text = std::string(1, c);
            advance(1);
            tokens.push_back(std::move(token));
            continue;
        }

        throw ParseError(file, line, column,
                         std::string("unexpected character '") + c + "'");
    }

    Token end;
    end.kind = TokenKind::End;
    end.line = line;
    end.column = column;
    tokens.push_back(std::move(end));
    return tokens;
}

}  // namespace hybridsim::dsl
