#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hybridsim/metrics/profile.hpp"
#include "hybridsim/metrics/tokens.hpp"

namespace hybridsim::metrics {

/// Operator/operand counts and the derived size measures.  Operators are
/// the profile's symbols plus keywords; operands are identifiers and
/// literals; distinctness is by exact token text (so `2` and `2.0` are two
/// different operands).
struct HalsteadMetrics {
    long long distinct_operators = 0;  // eta1
    long long distinct_operands = 0;   // eta2
    long long total_operators = 0;     // N1
    long long total_operands = 0;      // N2

    [[nodiscard]] long long length() const {  // N
        return total_operators + total_operands;
    }
    [[nodiscard]] long long vocabulary() const {  // eta
        return distinct_operators + distinct_operands;
    }
    /// N * log2(vocabulary), with an empty vocabulary counting as 1 so the
    /// empty and single-token cases give volume 0.
    [[nodiscard]] double volume() const;
    /// (eta1 / 2) * (N2 / eta2); zero when either side has no tokens.
    [[nodiscard]] double difficulty() const;
    [[nodiscard]] double effort() const { return difficulty() * volume(); }
    [[nodiscard]] double estimated_bugs() const { return volume() / 3000.0; }
};

/// Measure a token range [first, last).
[[nodiscard]] HalsteadMetrics halstead_of(const std::vector<MetricToken>& tokens,
                                          std::size_t first, std::size_t last);

/// Measure whole source text.  Throws TokenError as tokenize does.
[[nodiscard]] HalsteadMetrics halstead(const std::string& text,
                                       const LanguageProfile& profile);

}  // namespace hybridsim::metrics
