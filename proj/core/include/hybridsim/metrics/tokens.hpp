#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hybridsim/metrics/profile.hpp"

namespace hybridsim::metrics {

enum class MetricTokenKind {
    Operator,    ///< symbol from the profile's operator list
    Keyword,     ///< identifier listed as a keyword
    Identifier,  ///< any other identifier
    Number,      ///< numeric literal
    String,      ///< string literal, text includes the delimiters
};

struct MetricToken {
    MetricTokenKind kind = MetricTokenKind::Operator;
    std::string text;
    std::size_t line = 1;    ///< 1-based
    std::size_t column = 1;  ///< 1-based
};

/// Split source text into metric tokens, skipping comments and whitespace.
/// Operator symbols match longest-first; identifiers on the profile's
/// keyword list become Keyword tokens.  Throws TokenError (with position)
/// for a character no rule accepts or an unterminated string.
[[nodiscard]] std::vector<MetricToken> tokenize(const std::string& text,
                                                const LanguageProfile& profile);

}  // namespace hybridsim::metrics
