#include "hybridsim/metrics/lines.hpp"

namespace hybridsim::metrics {

namespace {

std::vector<std::string> physical_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t begin = 0;
    while (begin < text.size()) {
        std::size_t end = text.find('\n', begin);
        if (end == std::string::npos) {
            lines.push_back(text.substr(begin));
            break;
        }
        lines.push_back(text.substr(begin, end - begin));
        begin = end + 1;
    }
    return lines;
}

bool whitespace_only(const std::string& line) {
    return line.find_first_not_of(" \t\r") == std::string::npos;
}

bool matches_at(const std::string& line, std::size_t pos, const std::string& what) {
    return !what.empty() && line.compare(pos, what.size(), what) == 0;
}

/// Scan one line outside/inside comments, flagging whether it carries any
/// code and/or any comment.  `open_block` is the index of the block-comment
/// style currently open (-1 when none) and is updated for the next line.
void scan_line(const std::string& line, const LanguageProfile& profile,
               int& open_block, bool& has_code, bool& has_comment) {
    std::size_t pos = 0;
    if (open_block >= 0) {
        has_comment = true;
        const std::string& close = profile.block_comments[open_block].second;
        std::size_t end = line.find(close);
        if (end == std::string::npos)
            return;
        pos = end + close.size();
        open_block = -1;
    }

    while (pos < line.size()) {
        char c = line[pos];
        if (c == ' ' || c == '\t' || c == '\r') {
            ++pos;
            continue;
        }
        bool consumed = false;
        for (const std::string& marker : profile.line_comments)
            if (matches_at(line, pos, marker)) {
                has_comment = true;
                return;  // the rest of the line is comment
            }
        for (std::size_t style = 0; style < profile.block_comments.size(); ++style) {
            const auto& [open, close] = profile.block_comments[style];
            if (!matches_at(line, pos, open))
                continue;
            has_comment = true;
            std::size_t end = line.find(close, pos + open.size());
            if (end == std::string::npos) {
                open_block = static_cast<int>(style);
                return;
            }
            pos = end + close.size();
            consumed = true;
            break;
        }
        if (consumed)
            continue;
        for (const std::string& delimiter : profile.string_delimiters) {
            if (!matches_at(line, pos, delimiter))
                continue;
            has_code = true;
            pos += delimiter.size();
            while (pos < line.size()) {
                if (line[pos] == '\\') {
                    pos += 2;
                    continue;
                }
                if (matches_at(line, pos, delimiter)) {
                    pos += delimiter.size();
                    break;
                }
                ++pos;
            }
            consumed = true;
            break;
        }
        if (consumed)
            continue;
        has_code = true;
        ++pos;
    }
}

}  // namespace

std::vector<LineKind> classify_each_line(const std::string& text,
                                         const LanguageProfile& profile,
                                         std::vector<std::string>* warnings) {
    std::vector<LineKind> kinds;
    int open_block = -1;
    std::size_t opened_on = 0;
    std::size_t line_number = 0;
    for (const std::string& line : physical_lines(text)) {
        ++line_number;
        if (whitespace_only(line)) {
            kinds.push_back(LineKind::Blank);
            continue;
        }
        bool was_open = open_block >= 0;
        bool has_code = false;
        bool has_comment = false;
        scan_line(line, profile, open_block, has_code, has_comment);
        if (!was_open && open_block >= 0)
            opened_on = line_number;
        kinds.push_back(has_code ? LineKind::Code : LineKind::Comment);
    }
    if (open_block >= 0 && warnings != nullptr)
        warnings->push_back("block comment opened on line "
                            + std::to_string(opened_on)
                            + " is never closed; classified as comment to "
                              "end of file");
    return kinds;
}

LineCounts classify_lines(const std::string& text, const LanguageProfile& profile,
                          std::vector<std::string>* warnings) {
    LineCounts counts;
    for (LineKind kind : classify_each_line(text, profile, warnings)) {
        switch (kind) {
        case LineKind::Blank: ++counts.blank; break;
        case LineKind::Comment: ++counts.comment; break;
        case LineKind::Code: ++counts.code; break;
        }
    }
    return counts;
}

std::vector<std::string> code_lines(const std::string& text,
                                    const LanguageProfile& profile) {
    std::vector<std::string> lines = physical_lines(text);
    std::vector<LineKind> kinds = classify_each_line(text, profile);
    std::vector<std::string> code;
    for (std::size_t i = 0; i < lines.size(); ++i)
        if (kinds[i] == LineKind::Code)
            code.push_back(lines[i]);
    return code;
}

}  // namespace hybridsim::metrics
