#include "hybridsim/metrics/tokens.hpp"

#include <algorithm>
#include <cctype>

#include "hybridsim/errors.hpp"

namespace hybridsim::metrics {

namespace {

bool identifier_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool identifier_part(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

class Scanner {
public:
    Scanner(const std::string& text, const LanguageProfile& profile)
        : text_(text), profile_(profile) {
        // Longest symbols first, so "->" beats "-" and "<=" beats "<".
        operators_ = profile.operators;
        std::stable_sort(operators_.begin(), operators_.end(),
                         [](const std::string& a, const std::string& b) {
                             return a.size() > b.size();
                         });
    }

    std::vector<MetricToken> run() {
        std::vector<MetricToken> tokens;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance(1);
                continue;
            }
            if (skip_line_comment() || skip_block_comment())
                continue;
            if (const std::string* delimiter = match_any(profile_.string_delimiters)) {
                tokens.push_back(read_string(*delimiter));
                continue;
            }
            if (identifier_start(c)) {
                tokens.push_back(read_identifier());
                continue;
            }
            if (digit(c)) {
                tokens.push_back(read_number());
                continue;
            }
            if (const std::string* symbol = match_any(operators_)) {
                tokens.push_back({MetricTokenKind::Operator, *symbol, line_, column_});
                advance(symbol->size());
                continue;
            }
            throw TokenError(line_, column_,
                             std::string("unexpected character '") + c + "'");
        }
        return tokens;
    }

private:
    bool matches(const std::string& what) const {
        return !what.empty() && text_.compare(pos_, what.size(), what) == 0;
    }

    const std::string* match_any(const std::vector<std::string>& candidates) const {
        for (const std::string& candidate : candidates)
            if (matches(candidate))
                return &candidate;
        return nullptr;
    }

    bool skip_line_comment() {
        if (match_any(profile_.line_comments) == nullptr)
            return false;
        while (pos_ < text_.size() && text_[pos_] != '\n')
            advance(1);
        return true;
    }

    bool skip_block_comment() {
        for (const auto& [open, close] : profile_.block_comments) {
            if (!matches(open))
                continue;
            advance(open.size());
            while (pos_ < text_.size() && !matches(close))
                advance(1);
            if (pos_ < text_.size())
                advance(close.size());
            // An unterminated block simply swallows the rest of the file,
            // mirroring the line classifier.
            return true;
        }
        return false;
    }

    MetricToken read_string(const std::string& delimiter) {
        std::size_t start_line = line_;
        std::size_t start_column = column_;
        std::size_t start = pos_;
        advance(delimiter.size());
        while (pos_ < text_.size() && text_[pos_] != '\n') {
            if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) {
                advance(2);
                continue;
            }
            if (matches(delimiter)) {
                advance(delimiter.size());
                return {MetricTokenKind::String, text_.substr(start, pos_ - start),
                        start_line, start_column};
            }
            advance(1);
        }
        throw TokenError(start_line, start_column, "unterminated string literal");
    }

    MetricToken read_identifier() {
        std::size_t start_line = line_;
        std::size_t start_column = column_;
        std::size_t start = pos_;
        while (pos_ < text_.size() && identifier_part(text_[pos_]))
            advance(1);
        std::string word = text_.substr(start, pos_ - start);
        MetricTokenKind kind = profile_.is_keyword(word) ? MetricTokenKind::Keyword
                                                         : MetricTokenKind::Identifier;
        return {kind, std::move(word), start_line, start_column};
    }

    MetricToken read_number() {
        std::size_t start_line = line_;
        std::size_t start_column = column_;
        std::size_t start = pos_;
        while (pos_ < text_.size() && digit(text_[pos_]))
            advance(1);
        if (pos_ + 1 < text_.size() && text_[pos_] == '.' && digit(text_[pos_ + 1])) {
            advance(1);
            while (pos_ < text_.size() && digit(text_[pos_]))
                advance(1);
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t peek = pos_ + 1;
            if (peek < text_.size() && (text_[peek] == '+' || text_[peek] == '-'))
                ++peek;
            if (peek < text_.size() && digit(text_[peek])) {
                advance(peek - pos_ + 1);
                while (pos_ < text_.size() && digit(text_[pos_]))
                    advance(1);
            }
        }
        return {MetricTokenKind::Number, text_.substr(start, pos_ - start),
                start_line, start_column};
    }

    void advance(std::size_t count) {
        for (std::size_t i = 0; i < count && pos_ < text_.size(); ++i) {
            if (text_[pos_] == '\n') {
                ++line_;
                column_ = 1;
            } else {
                ++column_;
            }
            ++pos_;
        }
    }

    const std::string& text_;
    const LanguageProfile& profile_;
    std::vector<std::string> operators_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

}  // namespace

std::vector<MetricToken> tokenize(const std::string& text,
                                  const LanguageProfile& profile) {
    return Scanner(text, profile).run();
}

}  // namespace hybridsim::metrics
