#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hybridsim/metrics/profile.hpp"
#include "hybridsim/metrics/tokens.hpp"

namespace hybridsim::metrics {

/// One measurable unit: a token range [first_token, last_token) and the
/// 1-based source lines it spans.
struct UnitSpan {
    std::string name;
    std::size_t first_token = 0;
    std::size_t last_token = 0;
    std::size_t first_line = 1;
    std::size_t last_line = 1;
};

/// Split a token stream into units: each profile unit keyword at brace
/// depth zero opens a unit named by the following identifier, reaching to
/// its matching closing brace.  When the profile declares no unit keywords
/// or none occur, the whole stream is one unit called "(file)".
[[nodiscard]] std::vector<UnitSpan> split_units(const std::vector<MetricToken>& tokens,
                                                const LanguageProfile& profile);

/// Number of decision tokens in the token range [first, last).
[[nodiscard]] long long decision_count(const std::vector<MetricToken>& tokens,
                                       std::size_t first, std::size_t last,
                                       const LanguageProfile& profile);

struct UnitComplexity {
    std::string name;
    long long cc = 1;
};

/// Cyclomatic complexity per unit: 1 plus the number of decision tokens
/// inside the unit.  Throws TokenError as tokenize does.
[[nodiscard]] std::vector<UnitComplexity> cyclomatic(const std::string& text,
                                                     const LanguageProfile& profile);

[[nodiscard]] double average_cc(const std::vector<UnitComplexity>& units);

struct MaintainabilityIndex {
    double raw = 0.0;
    double normalized = 0.0;  ///< max(0, 100 * raw / 171)
};

/// 171 - 5.2 ln(V) - 0.23 CC - 16.2 ln(LOC).  Volume and LOC below 1 are
/// clamped to 1 so the logarithms stay defined.
[[nodiscard]] MaintainabilityIndex maintainability_index(double volume, double cc,
                                                         long long loc);

}  // namespace hybridsim::metrics
