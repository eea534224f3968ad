#pragma once

#include <string>
#include <vector>

#include "hybridsim/metrics/profile.hpp"

namespace hybridsim::metrics {

enum class LineKind { Blank, Comment, Code };

struct LineCounts {
    long long code = 0;
    long long comment = 0;
    long long blank = 0;

    [[nodiscard]] long long physical() const { return code + comment + blank; }
};

/// Classify every physical line:
///  - blank: whitespace only (even inside a block comment),
///  - comment: the first non-whitespace token opens or continues a comment
///    and nothing but comments follows,
///  - code: everything else — a code line with a trailing comment is code.
///
/// A block comment left open at end of file keeps classifying lines as
/// comments and appends a note to `warnings` when given.
[[nodiscard]] std::vector<LineKind>
classify_each_line(const std::string& text, const LanguageProfile& profile,
                   std::vector<std::string>* warnings = nullptr);

/// Totals of classify_each_line; code + comment + blank equals the number
/// of physical lines.
[[nodiscard]] LineCounts classify_lines(const std::string& text,
                                        const LanguageProfile& profile,
                                        std::vector<std::string>* warnings = nullptr);

/// The text of every code line, in order — the diff's input.
[[nodiscard]] std::vector<std::string> code_lines(const std::string& text,
                                                  const LanguageProfile& profile);

}  // namespace hybridsim::metrics
