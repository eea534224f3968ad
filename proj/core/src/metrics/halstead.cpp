#include "hybridsim/metrics/halstead.hpp"

#include <cmath>
#include <set>

namespace hybridsim::metrics {

double HalsteadMetrics::volume() const {
    double eta = static_cast<double>(std::max<long long>(vocabulary(), 1));
    return static_cast<double>(length()) * std::log2(eta);
}

double HalsteadMetrics::difficulty() const {
    if (distinct_operators == 0 || distinct_operands == 0)
        return 0.0;
    return (static_cast<double>(distinct_operators) / 2.0)
           * (static_cast<double>(total_operands)
              / static_cast<double>(distinct_operands));
}

HalsteadMetrics halstead_of(const std::vector<MetricToken>& tokens,
                            std::size_t first, std::size_t last) {
    HalsteadMetrics metrics;
    std::set<std::string> operators;
    std::set<std::string> operands;
    for (std::size_t i = first; i < last && i < tokens.size(); ++i) {
        const MetricToken& token = tokens[i];
        switch (token.kind) {
        case MetricTokenKind::Operator:
        case MetricTokenKind::Keyword:
            ++metrics.total_operators;
            operators.insert(token.text);
            break;
        case MetricTokenKind::Identifier:
        case MetricTokenKind::Number:
        case MetricTokenKind::String:
            ++metrics.total_operands;
            operands.insert(token.text);
            break;
        }
    }
    metrics.distinct_operators = static_cast<long long>(operators.size());
    metrics.distinct_operands = static_cast<long long>(operands.size());
    return metrics;
}

HalsteadMetrics halstead(const std::string& text, const LanguageProfile& profile) {
    std::vector<MetricToken> tokens = tokenize(text, profile);
    return halstead_of(tokens, 0, tokens.size());
}

}  // namespace hybridsim::metrics
