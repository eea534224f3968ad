#include "hybridsim/metrics/complexity.hpp"

#include <algorithm>
#include <cmath>

namespace hybridsim::metrics {

namespace {

bool is_symbol(const MetricToken& token, const char* text) {
    return token.kind == MetricTokenKind::Operator && token.text == text;
}

/// Name of the unit opened at tokens[start]: the first identifier before
/// the unit's opening brace.
std::string unit_name(const std::vector<MetricToken>& tokens, std::size_t start) {
    for (std::size_t i = start + 1; i < tokens.size(); ++i) {
        if (is_symbol(tokens[i], "{"))
            break;
        if (tokens[i].kind == MetricTokenKind::Identifier)
            return tokens[i].text;
    }
    return "(anonymous)";
}

}  // namespace

std::vector<UnitSpan> split_units(const std::vector<MetricToken>& tokens,
                                  const LanguageProfile& profile) {
    std::vector<UnitSpan> units;
    long long depth = 0;
    std::size_t i = 0;
    while (i < tokens.size()) {
        const MetricToken& token = tokens[i];
        if (depth == 0 && token.kind == MetricTokenKind::Keyword
            && profile.is_unit_keyword(token.text)) {
            UnitSpan unit;
            unit.name = unit_name(tokens, i);
            unit.first_token = i;
            // Walk to the matching close of the unit's first brace.  A unit
            // without a body ends where the next top-level unit begins.
            std::size_t j = i + 1;
            while (j < tokens.size() && !is_symbol(tokens[j], "{")
                   && !(tokens[j].kind == MetricTokenKind::Keyword
                        && profile.is_unit_keyword(tokens[j].text)))
                ++j;
            if (j < tokens.size() && is_symbol(tokens[j], "{")) {
                long long inner = 1;
                ++j;
                while (j < tokens.size() && inner > 0) {
                    if (is_symbol(tokens[j], "{"))
                        ++inner;
                    else if (is_symbol(tokens[j], "}"))
                        --inner;
                    ++j;
                }
            }
            unit.last_token = j;
            unit.first_line = tokens[unit.first_token].line;
            unit.last_line = tokens[j - 1].line;
            units.push_back(std::move(unit));
            i = j;
            continue;
        }
        if (is_symbol(token, "{"))
            ++depth;
        else if (is_symbol(token, "}"))
            depth = std::max<long long>(depth - 1, 0);
        ++i;
    }

    if (units.empty()) {
        UnitSpan whole;
        whole.name = "(file)";
        whole.first_token = 0;
        whole.last_token = tokens.size();
        whole.first_line = 1;
        whole.last_line = tokens.empty() ? 1 : tokens.back().line;
        units.push_back(std::move(whole));
    }
    return units;
}

long long decision_count(const std::vector<MetricToken>& tokens, std::size_t first,
                         std::size_t last, const LanguageProfile& profile) {
    long long count = 0;
    for (std::size_t i = first; i < last && i < tokens.size(); ++i) {
        const MetricToken& token = tokens[i];
        bool countable = token.kind == MetricTokenKind::Operator
                         || token.kind == MetricTokenKind::Keyword;
        if (countable && profile.is_decision(token.text))
            ++count;
    }
    return count;
}

std::vector<UnitComplexity> cyclomatic(const std::string& text,
                                       const LanguageProfile& profile) {
    std::vector<MetricToken> tokens = tokenize(text, profile);
    std::vector<UnitComplexity> result;
    for (const UnitSpan& unit : split_units(tokens, profile))
        result.push_back({unit.name, 1
                                         + decision_count(tokens, unit.first_token,
                                                          unit.last_token, profile)});
    return result;
}

double average_cc(const std::vector<UnitComplexity>& units) {
    if (units.empty())
        return 0.0;
    long long total = 0;
    for (const UnitComplexity& unit : units)
        total += unit.cc;
    return static_cast<double>(total) / static_cast<double>(units.size());
}

MaintainabilityIndex maintainability_index(double volume, double cc, long long loc) {
    double v = std::max(volume, 1.0);
    double lines = static_cast<double>(std::max<long long>(loc, 1));
    MaintainabilityIndex mi;
    mi.raw = 171.0 - 5.2 * std::log(v) - 0.23 * cc - 16.2 * std::log(lines);
    mi.normalized = std::max(0.0, 100.0 * mi.raw / 171.0);
    return mi;
}

}  // namespace hybridsim::metrics
