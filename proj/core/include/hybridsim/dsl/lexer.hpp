#pragma once

#include <string>
#include <vector>

#include "hybridsim/errors.hpp"

namespace hybridsim::dsl {

enum class TokenKind {
    Identifier,  ///< names and keywords; the parser tells them apart
    Number,
    String,      ///< double-quoted, no escapes; used for include paths
    Symbol,      ///< punctuation and operators, longest match first
    End,
};

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;
    double number_value = 0.0;
    std::size_t line = 1;
    std::size_t column = 1;
};

/// Split model text into tokens.  `#` starts a comment running to the end of
/// the line.  Throws ParseError (tagged with `file`) on malformed input.
[[nodiscard]] std::vector<Token> tokenize(const std::string& text,
                                          const std::string& file);

}  // namespace hybridsim::dsl
